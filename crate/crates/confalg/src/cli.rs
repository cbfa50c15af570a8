//! JSON manifests of modules, maps and structures, and the command runner
//! behind the `confalg` binary.

use crate::ainf::{
    check_ainf, cohomology_delta, is_maurer_cartan, mc_defect, shift, shift_map, unshift_map, AInfStructure, CsCochain,
};
use crate::assocconf::{
    hochschild_delta, random_cochain, truncated_delta_ranks, AssocConfAlgebra, Cochain, ConformalBimodule,
};
use crate::confmap::{ConfMap, Failure, Report};
use crate::confmod::{Generator, GradedModule, ModElement};
use crate::lieconf::{
    check_lie, check_linf, lie_delta, random_lie_cochain, skew_symmetrize_ainf, skew_symmetrize_assoc,
    truncated_lie_delta_ranks, ConformalLModule, LInfStructure, LieConfAlgebra,
};
use crate::polyring::Poly;
use crate::transfer::{transfer_ainf, Contraction, TreeMode};
use crate::twocells::{
    check_two_alg_morphism, functor_s, functor_t, skeletal_from_cocycle, two_algebra_items, two_term_items,
    upsilon, ConfTwoAlgebra, SkeletalData, TwoTermAInf,
};
use clap::{Parser, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("{at}: {msg}")]
    Invalid { at: String, msg: String },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Math(String),
}

fn invalid(at: impl Into<String>, msg: impl Into<String>) -> CliError {
    CliError::Invalid { at: at.into(), msg: msg.into() }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    #[serde(default)]
    pub modules: Vec<ModuleSpec>,
    #[serde(default)]
    pub maps: Vec<MapSpec>,
    #[serde(default)]
    pub structures: Vec<StructureSpec>,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub metadata: Value,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSpec {
    pub name: String,
    pub generators: Vec<GeneratorSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub name: String,
    #[serde(default)]
    pub degree: i32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub name: String,
    pub source: String,
    pub target: String,
    pub arity: usize,
    #[serde(default)]
    pub degree: i32,
    #[serde(default)]
    pub table: Vec<EntrySpec>,
}

/// `inputs ↦ Σ coefficient · generator`, coefficients in the polynomial
/// surface syntax (`D`, `L1`, `L2`, …, rationals as `p/q`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntrySpec {
    pub inputs: Vec<String>,
    pub value: Vec<(String, String)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Assoc,
    Lie,
    Ainf,
    Linf,
    TwoTerm,
    TwoAlgebra,
    Contraction,
    Bimodule,
    Representation,
    Cochain,
}

/// A named bundle. `maps`, `refs` and `modules` send roles to names of maps,
/// earlier structures and modules.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureSpec {
    pub name: String,
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub maps: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub refs: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub modules: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub element: Option<Vec<(String, String)>>,
}

impl Manifest {
    pub fn from_json(s: &str) -> Result<Manifest, CliError> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifests serialize");
        s.push('\n');
        s
    }
}

pub fn parse_manifest(path: &Path) -> Result<Manifest, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    Manifest::from_json(&text)
}

/// Coefficients of a cochain over an A∞ structure, one map per arity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AInfCochain {
    pub maps: Vec<ConfMap>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Structure {
    Assoc(AssocConfAlgebra),
    Lie(LieConfAlgebra),
    AInf(AInfStructure),
    LInf(LInfStructure),
    TwoTerm(TwoTermAInf),
    TwoAlgebra(ConfTwoAlgebra),
    Contraction { contraction: Contraction, structure: String },
    Bimodule(ConformalBimodule),
    Representation(ConformalLModule),
    Hochschild { bimodule: String, cochain: Cochain },
    LieCochain { representation: String, cochain: Cochain },
    AInfCochain { structure: String, cochain: AInfCochain },
}

impl Structure {
    pub fn kind(&self) -> Kind {
        match self {
            Structure::Assoc(_) => Kind::Assoc,
            Structure::Lie(_) => Kind::Lie,
            Structure::AInf(_) => Kind::Ainf,
            Structure::LInf(_) => Kind::Linf,
            Structure::TwoTerm(_) => Kind::TwoTerm,
            Structure::TwoAlgebra(_) => Kind::TwoAlgebra,
            Structure::Contraction { .. } => Kind::Contraction,
            Structure::Bimodule(_) => Kind::Bimodule,
            Structure::Representation(_) => Kind::Representation,
            Structure::Hochschild { .. } | Structure::LieCochain { .. } | Structure::AInfCochain { .. } => Kind::Cochain,
        }
    }
}

/// A validated manifest with every name resolved.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub manifest: Manifest,
    pub modules: BTreeMap<String, Arc<GradedModule>>,
    pub maps: BTreeMap<String, ConfMap>,
    pub structures: Vec<(String, Structure)>,
}

fn parse_element(m: &GradedModule, pairs: &[(String, String)], at: &str) -> Result<ModElement, CliError> {
    let mut out = ModElement::zero();
    for (g, p) in pairs {
        let idx = m.index_of(g).map_err(|_| invalid(at, format!("unknown generator `{g}`")))?;
        let poly: Poly = p.parse().map_err(|e| invalid(at, format!("coefficient `{p}`: {e}")))?;
        out.add_term(idx, &poly);
    }
    Ok(out)
}

fn element_pairs(m: &GradedModule, v: &ModElement) -> Vec<(String, String)> {
    v.coords.iter().map(|(g, p)| (m.name(*g).to_string(), p.to_string())).collect()
}

impl Resolved {
    pub fn new(manifest: Manifest) -> Result<Resolved, CliError> {
        let mut modules = BTreeMap::new();
        for (i, spec) in manifest.modules.iter().enumerate() {
            let at = format!("modules[{i}] `{}`", spec.name);
            let gens = spec.generators.iter().map(|g| Generator { name: g.name.clone(), degree: g.degree }).collect();
            let m = GradedModule::new(gens).map_err(|e| invalid(&at, e.to_string()))?;
            if modules.insert(spec.name.clone(), Arc::new(m)).is_some() {
                return Err(invalid(at, "duplicate module name"));
            }
        }
        let mut maps = BTreeMap::new();
        for (i, spec) in manifest.maps.iter().enumerate() {
            let at = format!("maps[{i}] `{}`", spec.name);
            let module = |n: &str, field: &str| {
                modules.get(n).cloned().ok_or_else(|| invalid(format!("{at}.{field}"), format!("unknown module `{n}`")))
            };
            let (src, tgt) = (module(&spec.source, "source")?, module(&spec.target, "target")?);
            let mut f = ConfMap::zero(src.clone(), tgt.clone(), spec.arity, spec.degree);
            for (j, e) in spec.table.iter().enumerate() {
                let at = format!("{at}.table[{j}]");
                if e.inputs.len() != spec.arity {
                    return Err(invalid(at, format!("{} inputs for a map of arity {}", e.inputs.len(), spec.arity)));
                }
                let tuple = e
                    .inputs
                    .iter()
                    .map(|g| src.index_of(g).map_err(|_| invalid(&at, format!("unknown generator `{g}` in module `{}`", spec.source))))
                    .collect::<Result<Vec<_>, _>>()?;
                if !f.value(&tuple).is_zero() {
                    return Err(invalid(at, "duplicate entry"));
                }
                let v = parse_element(&tgt, &e.value, &format!("{at}.value"))?;
                f.set(tuple, v).map_err(|e| invalid(&at, e.to_string()))?;
            }
            if maps.insert(spec.name.clone(), f).is_some() {
                return Err(invalid(at, "duplicate map name"));
            }
        }
        let mut out = Resolved { manifest: Manifest::default(), modules, maps, structures: Vec::new() };
        for (i, spec) in manifest.structures.iter().enumerate() {
            let at = format!("structures[{i}] `{}`", spec.name);
            if out.structures.iter().any(|(n, _)| *n == spec.name) {
                return Err(invalid(at, "duplicate structure name"));
            }
            let s = out.build(spec, &at)?;
            out.structures.push((spec.name.clone(), s));
        }
        out.manifest = manifest;
        Ok(out)
    }

    pub fn structure(&self, name: &str) -> Option<&Structure> {
        self.structures.iter().find(|(n, _)| n == name).map(|(_, s)| s)
    }

    fn map(&self, spec: &StructureSpec, role: &str, at: &str) -> Result<ConfMap, CliError> {
        let name = spec.maps.get(role).ok_or_else(|| invalid(at, format!("missing map `{role}`")))?;
        self.maps.get(name).cloned().ok_or_else(|| invalid(format!("{at}.maps.{role}"), format!("unknown map `{name}`")))
    }

    fn expect_arity(f: &ConfMap, arity: usize, at: &str, role: &str) -> Result<(), CliError> {
        if f.arity != arity {
            return Err(invalid(format!("{at}.maps.{role}"), format!("arity {} where {arity} is required", f.arity)));
        }
        Ok(())
    }

    fn reference<'s>(&'s self, spec: &'s StructureSpec, role: &str, at: &str) -> Result<(&'s str, &'s Structure), CliError> {
        let name = spec.refs.get(role).ok_or_else(|| invalid(at, format!("missing reference `{role}`")))?;
        let s = self
            .structure(name)
            .ok_or_else(|| invalid(format!("{at}.refs.{role}"), format!("unknown structure `{name}` (declare it first)")))?;
        Ok((name, s))
    }

    fn module_role(&self, spec: &StructureSpec, role: &str, at: &str) -> Result<Arc<GradedModule>, CliError> {
        let name = spec.modules.get(role).ok_or_else(|| invalid(at, format!("missing module `{role}`")))?;
        self.modules.get(name).cloned().ok_or_else(|| invalid(format!("{at}.modules.{role}"), format!("unknown module `{name}`")))
    }

    /// Maps named by role prefix and arity, e.g. `mu2`, `mu3`.
    fn graded_maps(&self, spec: &StructureSpec, prefix: &str, at: &str) -> Result<BTreeMap<usize, ConfMap>, CliError> {
        let mut out = BTreeMap::new();
        for role in spec.maps.keys() {
            let k: usize = role
                .strip_prefix(prefix)
                .and_then(|r| r.parse().ok())
                .ok_or_else(|| invalid(format!("{at}.maps.{role}"), format!("roles are {prefix}1, {prefix}2, …")))?;
            let f = self.map(spec, role, at)?;
            Self::expect_arity(&f, k, at, role)?;
            out.insert(k, f);
        }
        Ok(out)
    }

    fn build(&self, spec: &StructureSpec, at: &str) -> Result<Structure, CliError> {
        let wrap = |e: String| invalid(at, e);
        Ok(match spec.kind {
            Kind::Assoc => {
                let f = self.map(spec, "mult", at)?;
                Self::expect_arity(&f, 2, at, "mult")?;
                Structure::Assoc(AssocConfAlgebra::new(f).map_err(|e| wrap(e.to_string()))?)
            }
            Kind::Lie => {
                let f = self.map(spec, "bracket", at)?;
                Self::expect_arity(&f, 2, at, "bracket")?;
                Structure::Lie(LieConfAlgebra::new(f).map_err(|e| wrap(e.to_string()))?)
            }
            Kind::Ainf => {
                let maps = self.graded_maps(spec, "mu", at)?;
                let m = self.module_for(spec, &maps, at)?;
                Structure::AInf(AInfStructure::new(m, maps).map_err(|e| wrap(e.to_string()))?)
            }
            Kind::Linf => {
                let maps = self.graded_maps(spec, "l", at)?;
                let m = self.module_for(spec, &maps, at)?;
                Structure::LInf(LInfStructure::new(m, maps).map_err(|e| wrap(e.to_string()))?)
            }
            Kind::TwoTerm => {
                let (b, m2, m3) = (self.map(spec, "beta", at)?, self.map(spec, "mu2", at)?, self.map(spec, "mu3", at)?);
                Structure::TwoTerm(TwoTermAInf::new(b, m2, m3).map_err(|e| wrap(e.to_string()))?)
            }
            Kind::TwoAlgebra => {
                let get = |r: &str| self.map(spec, r, at);
                Structure::TwoAlgebra(
                    ConfTwoAlgebra::new(get("s")?, get("t")?, get("iota")?, get("pi0")?, get("pi1")?, get("associator")?)
                        .map_err(|e| wrap(e.to_string()))?,
                )
            }
            Kind::Contraction => {
                let (name, s) = self.reference(spec, "structure", at)?;
                if !matches!(s, Structure::AInf(_)) {
                    return Err(invalid(format!("{at}.refs.structure"), "must name an ainf structure"));
                }
                let get = |r: &str| self.map(spec, r, at);
                let c = Contraction::new(get("rho1")?, get("theta1")?, get("p")?, get("i")?, get("h")?)
                    .map_err(|e| wrap(e.to_string()))?;
                Structure::Contraction { contraction: c, structure: name.to_string() }
            }
            Kind::Bimodule => {
                let (_, s) = self.reference(spec, "algebra", at)?;
                let Structure::Assoc(a) = s else {
                    return Err(invalid(format!("{at}.refs.algebra"), "must name an assoc structure"));
                };
                let m = self.module_role(spec, "module", at)?;
                let action = self.map(spec, "action", at)?;
                let (left, right) = split_action(&action, a.module.rank(), m.rank(), true, at)?;
                Structure::Bimodule(ConformalBimodule::new(a.clone(), m, &left, &right).map_err(|e| wrap(e.to_string()))?)
            }
            Kind::Representation => {
                let (_, s) = self.reference(spec, "algebra", at)?;
                let Structure::Lie(l) = s else {
                    return Err(invalid(format!("{at}.refs.algebra"), "must name a lie structure"));
                };
                let m = self.module_role(spec, "module", at)?;
                let action = self.map(spec, "action", at)?;
                let (left, _) = split_action(&action, l.module.rank(), m.rank(), false, at)?;
                Structure::Representation(ConformalLModule::new(l.clone(), m, &left).map_err(|e| wrap(e.to_string()))?)
            }
            Kind::Cochain => self.build_cochain(spec, at)?,
        })
    }

    fn module_for(&self, spec: &StructureSpec, maps: &BTreeMap<usize, ConfMap>, at: &str) -> Result<Arc<GradedModule>, CliError> {
        if let Some(f) = maps.values().next() {
            return Ok(f.source.clone());
        }
        self.module_role(spec, "module", at)
    }

    fn build_cochain(&self, spec: &StructureSpec, at: &str) -> Result<Structure, CliError> {
        let (role, (name, over)) = match ["bimodule", "representation", "structure"].iter().find(|r| spec.refs.contains_key(**r)) {
            Some(r) => (*r, self.reference(spec, r, at)?),
            None => return Err(invalid(at, "a cochain refers to a bimodule, representation or structure")),
        };
        let plain = |module: &Arc<GradedModule>| -> Result<Cochain, CliError> {
            match &spec.element {
                Some(pairs) => Ok(Cochain::Zero(parse_element(module, pairs, &format!("{at}.element"))?)),
                None => Ok(Cochain::Map(self.map(spec, "cochain", at)?)),
            }
        };
        Ok(match (role, over) {
            ("bimodule", Structure::Bimodule(b)) => {
                Structure::Hochschild { bimodule: name.into(), cochain: plain(&b.module)? }
            }
            ("representation", Structure::Representation(r)) => {
                Structure::LieCochain { representation: name.into(), cochain: plain(&r.module)? }
            }
            ("structure", Structure::AInf(_)) => {
                let maps = self.graded_maps(spec, "c", at)?.into_values().collect();
                Structure::AInfCochain { structure: name.into(), cochain: AInfCochain { maps } }
            }
            _ => return Err(invalid(format!("{at}.refs.{role}"), format!("`{name}` has the wrong kind"))),
        })
    }
}

type Table = BTreeMap<(usize, usize), ModElement>;

/// Splits an action map on `A ⊕ M` (algebra generators first) into its
/// left and right parts, in local indices.
fn split_action(action: &ConfMap, ra: usize, rm: usize, two_sided: bool, at: &str) -> Result<(Table, Table), CliError> {
    if action.arity != 2 || action.source.rank() != ra + rm || action.target != action.source {
        return Err(invalid(format!("{at}.maps.action"), "must be a binary map on the algebra generators followed by the module generators"));
    }
    let local = |v: &ModElement| -> Result<ModElement, CliError> {
        v.coords
            .iter()
            .map(|(g, p)| if *g >= ra { Ok((g - ra, p.clone())) } else { Err(invalid(at, "action values must lie in the module")) })
            .collect::<Result<_, _>>()
            .map(|coords| ModElement { coords })
    };
    let (mut left, mut right) = (Table::new(), Table::new());
    for (t, v) in action.entries() {
        match (t[0] < ra, t[1] < ra) {
            (true, false) => {
                left.insert((t[0], t[1] - ra), local(v)?);
            }
            (false, true) if two_sided => {
                right.insert((t[0] - ra, t[1]), local(v)?);
            }
            _ => return Err(invalid(at, "action entries pair an algebra generator with a module generator")),
        }
    }
    Ok((left, right))
}

/// Builds manifests from structures, reusing equal modules.
#[derive(Debug, Default)]
pub struct ManifestBuilder {
    manifest: Manifest,
}

impl ManifestBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_manifest(manifest: Manifest) -> Self {
        ManifestBuilder { manifest }
    }

    pub fn finish(self) -> Manifest {
        self.manifest
    }

    fn fresh(&self, base: &str, taken: impl Fn(&str) -> bool) -> String {
        if !taken(base) {
            return base.to_string();
        }
        (2..).map(|i| format!("{base}#{i}")).find(|n| !taken(n)).expect("some name is free")
    }

    pub fn add_module(&mut self, m: &GradedModule, name: &str) -> String {
        let spec_gens: Vec<GeneratorSpec> =
            m.generators().iter().map(|g| GeneratorSpec { name: g.name.clone(), degree: g.degree }).collect();
        if let Some(s) = self.manifest.modules.iter().find(|s| s.generators == spec_gens) {
            return s.name.clone();
        }
        let name = self.fresh(name, |n| self.manifest.modules.iter().any(|s| s.name == n));
        self.manifest.modules.push(ModuleSpec { name: name.clone(), generators: spec_gens });
        name
    }

    pub fn add_map(&mut self, f: &ConfMap, name: &str) -> String {
        let source = self.add_module(&f.source, &format!("{name}.source"));
        let target = self.add_module(&f.target, &format!("{name}.target"));
        let table = f
            .entries()
            .map(|(t, v)| EntrySpec {
                inputs: t.iter().map(|&g| f.source.name(g).to_string()).collect(),
                value: element_pairs(&f.target, v),
            })
            .collect();
        let name = self.fresh(name, |n| self.manifest.maps.iter().any(|s| s.name == n));
        self.manifest.maps.push(MapSpec { name: name.clone(), source, target, arity: f.arity, degree: f.degree, table });
        name
    }

    fn push(&mut self, name: &str, kind: Kind, maps: Vec<(&str, String)>, refs: Vec<(&str, String)>, modules: Vec<(&str, String)>) -> String {
        let name = self.fresh(name, |n| self.manifest.structures.iter().any(|s| s.name == n));
        let own = |v: Vec<(&str, String)>| v.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
        self.manifest.structures.push(StructureSpec {
            name: name.clone(),
            kind,
            maps: own(maps),
            refs: own(refs),
            modules: own(modules),
            element: None,
        });
        name
    }

    fn roles(&mut self, name: &str, maps: &[(&str, &ConfMap)]) -> Vec<(&'static str, String)> {
        maps.iter()
            .map(|(role, f)| {
                let role: &'static str = Box::leak(role.to_string().into_boxed_str());
                (role, self.add_map(f, &format!("{name}.{role}")))
            })
            .collect()
    }

    pub fn add_assoc(&mut self, a: &AssocConfAlgebra, name: &str) -> String {
        self.add_module(&a.module, name);
        let maps = self.roles(name, &[("mult", &a.mult)]);
        self.push(name, Kind::Assoc, maps, vec![], vec![])
    }

    pub fn add_lie(&mut self, l: &LieConfAlgebra, name: &str) -> String {
        self.add_module(&l.module, name);
        let maps = self.roles(name, &[("bracket", &l.bracket)]);
        self.push(name, Kind::Lie, maps, vec![], vec![])
    }

    fn graded(&mut self, name: &str, module: &GradedModule, prefix: &str, maps: &BTreeMap<usize, ConfMap>, kind: Kind) -> String {
        let mname = self.add_module(module, name);
        let roles: Vec<(String, &ConfMap)> = maps.iter().map(|(k, f)| (format!("{prefix}{k}"), f)).collect();
        let named: Vec<(&str, &ConfMap)> = roles.iter().map(|(r, f)| (r.as_str(), *f)).collect();
        let maps = self.roles(name, &named);
        let modules = if maps.is_empty() { vec![("module", mname)] } else { vec![] };
        self.push(name, kind, maps, vec![], modules)
    }

    pub fn add_ainf(&mut self, s: &AInfStructure, name: &str) -> String {
        self.graded(name, &s.module, "mu", s.mults(), Kind::Ainf)
    }

    pub fn add_linf(&mut self, s: &LInfStructure, name: &str) -> String {
        self.graded(name, &s.module, "l", s.brackets(), Kind::Linf)
    }

    pub fn add_two_term(&mut self, x: &TwoTermAInf, name: &str) -> String {
        self.add_module(&x.module, name);
        let maps = self.roles(name, &[("beta", &x.beta), ("mu2", &x.mu2), ("mu3", &x.mu3)]);
        self.push(name, Kind::TwoTerm, maps, vec![], vec![])
    }

    pub fn add_two_algebra(&mut self, c: &ConfTwoAlgebra, name: &str) -> String {
        self.add_module(&c.objects, &format!("{name}.objects"));
        self.add_module(&c.arrows, &format!("{name}.arrows"));
        let maps = self.roles(
            name,
            &[("s", &c.s), ("t", &c.t), ("iota", &c.iota), ("pi0", &c.pi0), ("pi1", &c.pi1), ("associator", &c.associator)],
        );
        self.push(name, Kind::TwoAlgebra, maps, vec![], vec![])
    }

    pub fn add_contraction(&mut self, c: &Contraction, structure: &str, name: &str) -> String {
        self.add_module(&c.small, &format!("{name}.small"));
        let maps = self.roles(name, &[("rho1", &c.rho1), ("theta1", &c.theta1), ("p", &c.p), ("i", &c.i), ("h", &c.h)]);
        self.push(name, Kind::Contraction, maps, vec![("structure", structure.to_string())], vec![])
    }

    pub fn add_bimodule(&mut self, b: &ConformalBimodule, algebra: &str, name: &str) -> String {
        let (ext, a_idx, _) = b.extension();
        let module = self.add_module(&b.module, &format!("{name}.module"));
        self.add_module(ext, &format!("{name}.extension"));
        let mult = b.algebra.mult.embed(ext.clone(), a_idx, ext.clone(), a_idx);
        let action = b.semidirect_product().sub(&mult);
        let maps = self.roles(name, &[("action", &action)]);
        self.push(name, Kind::Bimodule, maps, vec![("algebra", algebra.to_string())], vec![("module", module)])
    }

    pub fn add_representation(&mut self, r: &ConformalLModule, algebra: &str, name: &str) -> String {
        let (ext, l_idx, m_idx) = r.extension();
        let module = self.add_module(&r.module, &format!("{name}.module"));
        self.add_module(ext, &format!("{name}.extension"));
        let mut action = ConfMap::zero(ext.clone(), ext.clone(), 2, 0);
        for ((x, v), val) in r.action_table() {
            let lifted = ModElement { coords: val.coords.iter().map(|(g, p)| (m_idx[*g], p.clone())).collect() };
            action.set(vec![l_idx[x], m_idx[v]], lifted).expect("actions have degree 0");
        }
        let maps = self.roles(name, &[("action", &action)]);
        self.push(name, Kind::Representation, maps, vec![("algebra", algebra.to_string())], vec![("module", module)])
    }

    /// A cochain over the bimodule or representation named by `role`/`over`.
    pub fn add_cochain(&mut self, c: &Cochain, target: &GradedModule, role: &str, over: &str, name: &str) -> String {
        let refs = vec![(role_name(role), over.to_string())];
        match c {
            Cochain::Map(f) => {
                let maps = self.roles(name, &[("cochain", f)]);
                self.push(name, Kind::Cochain, maps, refs, vec![])
            }
            Cochain::Zero(v) => {
                let name = self.push(name, Kind::Cochain, vec![], refs, vec![]);
                let spec = self.manifest.structures.last_mut().expect("just pushed");
                spec.element = Some(element_pairs(target, v));
                name
            }
        }
    }

    pub fn add_ainf_cochain(&mut self, c: &AInfCochain, structure: &str, name: &str) -> String {
        let roles: Vec<(String, &ConfMap)> = c.maps.iter().map(|f| (format!("c{}", f.arity), f)).collect();
        let named: Vec<(&str, &ConfMap)> = roles.iter().map(|(r, f)| (r.as_str(), *f)).collect();
        let maps = self.roles(name, &named);
        self.push(name, Kind::Cochain, maps, vec![("structure", structure.to_string())], vec![])
    }

    /// Writes `s` under `name`, with everything it refers to.
    pub fn add_structure(&mut self, r: &Resolved, name: &str) -> String {
        let s = r.structure(name).expect("structure exists");
        match s {
            Structure::Assoc(a) => self.add_assoc(a, name),
            Structure::Lie(l) => self.add_lie(l, name),
            Structure::AInf(x) => self.add_ainf(x, name),
            Structure::LInf(x) => self.add_linf(x, name),
            Structure::TwoTerm(x) => self.add_two_term(x, name),
            Structure::TwoAlgebra(c) => self.add_two_algebra(c, name),
            Structure::Contraction { contraction, structure } => {
                let dep = self.add_structure(r, structure);
                self.add_contraction(contraction, &dep, name)
            }
            Structure::Bimodule(b) => {
                let dep = self.add_assoc(&b.algebra, &algebra_name(r, name));
                self.add_bimodule(b, &dep, name)
            }
            Structure::Representation(m) => {
                let dep = self.add_lie(&m.algebra, &algebra_name(r, name));
                self.add_representation(m, &dep, name)
            }
            Structure::Hochschild { bimodule, cochain } => {
                let dep = self.add_structure(r, bimodule);
                let Some(Structure::Bimodule(b)) = r.structure(bimodule) else { unreachable!("checked on resolution") };
                self.add_cochain(cochain, &b.module, "bimodule", &dep, name)
            }
            Structure::LieCochain { representation, cochain } => {
                let dep = self.add_structure(r, representation);
                let Some(Structure::Representation(m)) = r.structure(representation) else {
                    unreachable!("checked on resolution")
                };
                self.add_cochain(cochain, &m.module, "representation", &dep, name)
            }
            Structure::AInfCochain { structure, cochain } => {
                let dep = self.add_structure(r, structure);
                self.add_ainf_cochain(cochain, &dep, name)
            }
        }
    }
}

fn role_name(role: &str) -> &'static str {
    match role {
        "bimodule" => "bimodule",
        "representation" => "representation",
        _ => "structure",
    }
}

fn algebra_name(r: &Resolved, name: &str) -> String {
    let spec = r.manifest.structures.iter().find(|s| s.name == name).expect("structure exists");
    spec.refs.get("algebra").cloned().unwrap_or_else(|| format!("{name}.algebra"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CommandName {
    CheckAssoc,
    CheckLie,
    CheckAinf,
    CheckLinf,
    #[value(name = "check-2term")]
    CheckTwoTerm,
    McCheck,
    Delta,
    AinfDelta,
    LieDelta,
    Cocycle,
    HhRanks,
    Skeletal,
    FunctorS,
    FunctorT,
    Roundtrip,
    Transfer,
    Skew,
    Semidirect,
}

impl CommandName {
    fn label(self) -> String {
        self.to_possible_value().expect("no skipped variants").get_name().to_string()
    }
}

#[derive(Debug, Clone, Parser)]
#[command(name = "confalg", version, about = "Exact checks and constructions for conformal algebras")]
pub struct Args {
    pub command: CommandName,
    /// Manifest (JSON) holding the input structures.
    pub manifest: PathBuf,
    /// Structure to use; defaults to the first one of a suitable kind.
    #[arg(long)]
    pub structure: Option<String>,
    /// Highest arity to check, build or rank; the arity of a seeded cochain.
    #[arg(long)]
    pub up_to: Option<usize>,
    /// ∂-degree bound for random cochains and truncated ranks (default 1).
    #[arg(long)]
    pub dmax: Option<u32>,
    /// λ-degree bound for random cochains and truncated ranks (default 1).
    #[arg(long)]
    pub lmax: Option<u32>,
    /// Transfer along binary trees only (the default).
    #[arg(long, conflicts_with = "general")]
    pub binary: bool,
    /// Transfer along planar trees with vertices of every arity.
    #[arg(long)]
    pub general: bool,
    /// Write the output manifest here instead of embedding it in the report.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Work on a random cochain drawn from this seed instead of a stored one.
    #[arg(long)]
    pub seed: Option<u64>,
}

/// Exit code and report of one command.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub report: Value,
}

impl Outcome {
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.report).expect("reports serialize");
        s.push('\n');
        s
    }
}

fn failure_json(f: &Failure) -> Value {
    json!({ "check": f.check, "inputs": f.witness.tuple, "value": f.witness.value })
}

struct Ctx<'a> {
    args: &'a Args,
    resolved: Resolved,
    report: serde_json::Map<String, Value>,
}

enum Verdict {
    Pass,
    Fail(Failure),
    FailMsg(String),
}

impl From<Report> for Verdict {
    fn from(r: Report) -> Self {
        match r {
            Ok(()) => Verdict::Pass,
            Err(f) => Verdict::Fail(f),
        }
    }
}

impl<'a> Ctx<'a> {
    fn pick(&mut self, kinds: &[Kind]) -> Result<(String, Structure), CliError> {
        let found = match &self.args.structure {
            Some(n) => {
                let s = self.resolved.structure(n).ok_or_else(|| CliError::Usage(format!("no structure named `{n}`")))?;
                if !kinds.contains(&s.kind()) {
                    return Err(CliError::Usage(format!("`{n}` is a {:?} structure, expected one of {kinds:?}", s.kind())));
                }
                (n.clone(), s.clone())
            }
            None => self
                .resolved
                .structures
                .iter()
                .find(|(_, s)| kinds.contains(&s.kind()))
                .cloned()
                .ok_or_else(|| CliError::Usage(format!("the manifest has no structure of kind {kinds:?}")))?,
        };
        self.report.insert("structure".into(), json!(found.0));
        Ok(found)
    }

    fn up_to(&self) -> Result<usize, CliError> {
        self.args.up_to.ok_or_else(|| CliError::Usage(format!("{} needs --up-to K", self.args.command.label())))
    }

    fn emit(&mut self, manifest: Manifest) -> Result<(), CliError> {
        match &self.args.out {
            Some(path) => {
                std::fs::write(path, manifest.to_json())
                    .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
                self.report.insert("written".into(), json!(path.display().to_string()));
            }
            None => {
                self.report.insert("output".into(), serde_json::to_value(&manifest)?);
            }
        }
        Ok(())
    }

    fn structure_of(&self, name: &str) -> Structure {
        self.resolved.structure(name).expect("resolved reference").clone()
    }

    fn rng(&self) -> Option<ChaCha8Rng> {
        self.args.seed.map(ChaCha8Rng::seed_from_u64)
    }
}

/// Runs one command. Exit code 0 on pass, 1 on a mathematical failure,
/// 2 on bad input.
pub fn run(args: &Args) -> Outcome {
    let mut report = serde_json::Map::new();
    report.insert("command".into(), json!(args.command.label()));
    let resolved = match parse_manifest(&args.manifest).and_then(Resolved::new) {
        Ok(r) => r,
        Err(e) => return error_outcome(report, e),
    };
    let mut ctx = Ctx { args, resolved, report };
    match dispatch(&mut ctx) {
        Ok(v) => {
            let (code, status) = match v {
                Verdict::Pass => (0, "pass"),
                Verdict::Fail(f) => {
                    ctx.report.insert("failure".into(), failure_json(&f));
                    (1, "fail")
                }
                Verdict::FailMsg(m) => {
                    ctx.report.insert("failure".into(), json!({ "check": m }));
                    (1, "fail")
                }
            };
            ctx.report.insert("status".into(), json!(status));
            Outcome { code, report: Value::Object(ctx.report) }
        }
        Err(e) => error_outcome(ctx.report, e),
    }
}

fn error_outcome(mut report: serde_json::Map<String, Value>, e: CliError) -> Outcome {
    report.insert("status".into(), json!("error"));
    report.insert("error".into(), json!(e.to_string()));
    Outcome { code: 2, report: Value::Object(report) }
}

fn dispatch(ctx: &mut Ctx) -> Result<Verdict, CliError> {
    use CommandName::*;
    match ctx.args.command {
        CheckAssoc => match ctx.pick(&[Kind::Assoc])?.1 {
            Structure::Assoc(a) => Ok(a.check_associativity().into()),
            _ => unreachable!(),
        },
        CheckLie => match ctx.pick(&[Kind::Lie])?.1 {
            Structure::Lie(l) => Ok(check_lie(&l).into()),
            _ => unreachable!(),
        },
        CheckAinf => {
            let k = ctx.up_to()?;
            match ctx.pick(&[Kind::Ainf])?.1 {
                Structure::AInf(s) => Ok(check_ainf(&s, k).into()),
                _ => unreachable!(),
            }
        }
        CheckLinf => {
            let k = ctx.up_to()?;
            match ctx.pick(&[Kind::Linf])?.1 {
                Structure::LInf(s) => Ok(check_linf(&s, k).into()),
                _ => unreachable!(),
            }
        }
        CheckTwoTerm => match ctx.pick(&[Kind::TwoTerm])?.1 {
            Structure::TwoTerm(x) => {
                let items = two_term_items(&x);
                let listed: Vec<Value> = items
                    .iter()
                    .map(|(i, r)| json!({ "item": i.to_string(), "status": if r.is_ok() { "pass" } else { "fail" } }))
                    .collect();
                ctx.report.insert("items".into(), Value::Array(listed));
                Ok(items.into_iter().try_for_each(|(_, r)| r).into())
            }
            _ => unreachable!(),
        },
        McCheck => {
            let k = ctx.up_to()?;
            match ctx.pick(&[Kind::Ainf])?.1 {
                Structure::AInf(s) => {
                    let rho = shift(&s);
                    if is_maurer_cartan(&rho, k) {
                        return Ok(Verdict::Pass);
                    }
                    let failing = (1..=k)
                        .map(|n| (n, mc_defect(&rho, n)))
                        .find(|(_, d)| !d.is_zero())
                        .expect("some arity fails");
                    Ok(Verdict::Fail(Failure {
                        check: format!("⟦ρ, ρ⟧ vanishes in arity {}", failing.0),
                        witness: failing.1.witness().expect("nonzero"),
                    }))
                }
                _ => unreachable!(),
            }
        }
        Delta | Cocycle => hochschild(ctx),
        LieDelta => lie_cochain(ctx),
        AinfDelta => ainf_delta(ctx),
        HhRanks => hh_ranks(ctx),
        Skeletal => skeletal(ctx),
        FunctorS => match ctx.pick(&[Kind::TwoTerm])? {
            (name, Structure::TwoTerm(x)) => {
                let c = functor_s(&x).map_err(|e| CliError::Math(e.to_string()));
                let c = match c {
                    Ok(c) => c,
                    Err(e) => return Ok(Verdict::FailMsg(e.to_string())),
                };
                let mut b = ManifestBuilder::new();
                b.add_two_algebra(&c, &format!("S({name})"));
                ctx.emit(b.finish())?;
                Ok(check_two_algebra_report(&c, ctx))
            }
            _ => unreachable!(),
        },
        FunctorT => match ctx.pick(&[Kind::TwoAlgebra])? {
            (name, Structure::TwoAlgebra(c)) => match functor_t(&c) {
                Ok(x) => {
                    let mut b = ManifestBuilder::new();
                    b.add_two_term(&x, &format!("T({name})"));
                    ctx.emit(b.finish())?;
                    Ok(Verdict::Pass)
                }
                Err(crate::twocells::TwoCellError::Axiom(f)) => Ok(Verdict::Fail(f)),
                Err(e) => Err(CliError::Usage(e.to_string())),
            },
            _ => unreachable!(),
        },
        Roundtrip => roundtrip(ctx),
        Transfer => transfer(ctx),
        Skew => match ctx.pick(&[Kind::Ainf, Kind::Assoc])? {
            (name, Structure::AInf(s)) => {
                let mut b = ManifestBuilder::new();
                b.add_linf(&skew_symmetrize_ainf(&s), &format!("skew({name})"));
                ctx.emit(b.finish())?;
                Ok(Verdict::Pass)
            }
            (name, Structure::Assoc(a)) => {
                let mut b = ManifestBuilder::new();
                b.add_lie(&skew_symmetrize_assoc(&a), &format!("skew({name})"));
                ctx.emit(b.finish())?;
                Ok(Verdict::Pass)
            }
            _ => unreachable!(),
        },
        Semidirect => match ctx.pick(&[Kind::Bimodule, Kind::Representation])? {
            (name, Structure::Bimodule(m)) => {
                let product = AssocConfAlgebra::new(m.semidirect_product().clone()).map_err(|e| CliError::Math(e.to_string()))?;
                let mut b = ManifestBuilder::new();
                b.add_assoc(&product, &format!("{}⋉{name}", algebra_name(&ctx.resolved, &name)));
                ctx.emit(b.finish())?;
                Ok(product.check_associativity().into())
            }
            (name, Structure::Representation(m)) => {
                let product = LieConfAlgebra::new(m.semidirect_product().clone()).map_err(|e| CliError::Math(e.to_string()))?;
                let mut b = ManifestBuilder::new();
                b.add_lie(&product, &format!("{}⋉{name}", algebra_name(&ctx.resolved, &name)));
                ctx.emit(b.finish())?;
                Ok(check_lie(&product).into())
            }
            _ => unreachable!(),
        },
    }
}

fn check_two_algebra_report(c: &ConfTwoAlgebra, ctx: &mut Ctx) -> Verdict {
    let items = two_algebra_items(c);
    let listed: Vec<Value> = items
        .iter()
        .map(|(l, r)| json!({ "item": l, "status": if r.is_ok() { "pass" } else { "fail" } }))
        .collect();
    ctx.report.insert("items".into(), Value::Array(listed));
    items.into_iter().try_for_each(|(_, r)| r).into()
}

fn truncation(ctx: &Ctx) -> (u32, u32) {
    (ctx.args.dmax.unwrap_or(1), ctx.args.lmax.unwrap_or(1))
}

/// The cochain to work on: a stored one, or with `--seed` a random one of
/// arity `--up-to` (default 2) over a bimodule.
fn hochschild(ctx: &mut Ctx) -> Result<Verdict, CliError> {
    let (dmax, lmax) = truncation(ctx);
    let (name, b, c) = match (ctx.rng(), &ctx.args.structure) {
        (Some(mut rng), _) => {
            let (name, s) = ctx.pick(&[Kind::Bimodule])?;
            let Structure::Bimodule(b) = s else { unreachable!() };
            let n = ctx.args.up_to.unwrap_or(2);
            let c = random_cochain(&b, n, dmax, lmax, 0.5, &mut rng);
            (name, b, c)
        }
        (None, _) => {
            let (_, s) = ctx.pick(&[Kind::Cochain])?;
            let Structure::Hochschild { bimodule, cochain } = s else {
                return Err(CliError::Usage("expected a cochain over a bimodule".into()));
            };
            let Structure::Bimodule(b) = ctx.structure_of(&bimodule) else { unreachable!() };
            (bimodule, b, cochain)
        }
    };
    let d = hochschild_delta(&b, &c).map_err(|e| CliError::Usage(e.to_string()))?;
    let dd = hochschild_delta(&b, &d).map_err(|e| CliError::Usage(e.to_string()))?;
    if ctx.args.command == CommandName::Cocycle {
        return Ok(match d.as_map().and_then(|f| f.witness()) {
            None => Verdict::Pass,
            Some(w) => Verdict::Fail(Failure { check: "δc = 0".into(), witness: w }),
        });
    }
    let mut out = ManifestBuilder::from_manifest(ctx.resolved.manifest.clone());
    if ctx.args.seed.is_some() {
        out.add_cochain(&c, &b.module, "bimodule", &name, "random");
    }
    out.add_cochain(&d, &b.module, "bimodule", &name, "delta");
    ctx.emit(out.finish())?;
    Ok(match dd.as_map().and_then(|f| f.witness()) {
        None => Verdict::Pass,
        Some(w) => Verdict::Fail(Failure { check: "δδc = 0".into(), witness: w }),
    })
}

fn lie_cochain(ctx: &mut Ctx) -> Result<Verdict, CliError> {
    let (dmax, lmax) = truncation(ctx);
    let (name, m, c) = match ctx.rng() {
        Some(mut rng) => {
            let (name, s) = ctx.pick(&[Kind::Representation])?;
            let Structure::Representation(m) = s else { unreachable!() };
            let n = ctx.args.up_to.unwrap_or(2);
            let c = random_lie_cochain(&m, n, dmax, lmax, 0.5, &mut rng);
            (name, m, c)
        }
        None => {
            let (_, s) = ctx.pick(&[Kind::Cochain])?;
            let Structure::LieCochain { representation, cochain } = s else {
                return Err(CliError::Usage("expected a cochain over a representation".into()));
            };
            let Structure::Representation(m) = ctx.structure_of(&representation) else { unreachable!() };
            (representation, m, cochain)
        }
    };
    let d = lie_delta(&m, &c).map_err(|e| CliError::Usage(e.to_string()))?;
    let dd = lie_delta(&m, &d).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut out = ManifestBuilder::from_manifest(ctx.resolved.manifest.clone());
    if ctx.args.seed.is_some() {
        out.add_cochain(&c, &m.module, "representation", &name, "random");
    }
    out.add_cochain(&d, &m.module, "representation", &name, "delta");
    ctx.emit(out.finish())?;
    Ok(match dd.as_map().and_then(|f| f.witness()) {
        None => Verdict::Pass,
        Some(w) => Verdict::Fail(Failure { check: "δδc = 0".into(), witness: w }),
    })
}

/// `δ_μ` of a cochain given by unshifted maps; the result is unshifted too.
pub fn ainf_cochain_delta(s: &AInfStructure, c: &AInfCochain) -> Result<AInfCochain, CliError> {
    let rho = shift(s);
    let v = rho.module.clone();
    let shifted: Vec<ConfMap> = c.maps.iter().map(|f| shift_map(f, v.clone(), v.clone())).collect();
    let degree = shifted.first().map(|f| f.degree).unwrap_or(0);
    let phi = CsCochain::new(v, degree, shifted).map_err(|e| CliError::Usage(format!("cochain is not homogeneous: {e}")))?;
    let d = cohomology_delta(&rho, &phi).map_err(|e| CliError::Usage(e.to_string()))?;
    let maps = d.components().map(|f| unshift_map(f, s.module.clone(), s.module.clone())).collect();
    Ok(AInfCochain { maps })
}

fn ainf_delta(ctx: &mut Ctx) -> Result<Verdict, CliError> {
    let (_, s) = ctx.pick(&[Kind::Cochain])?;
    let Structure::AInfCochain { structure, cochain } = s else {
        return Err(CliError::Usage("expected a cochain over an ainf structure".into()));
    };
    let Structure::AInf(a) = ctx.structure_of(&structure) else { unreachable!() };
    let d = ainf_cochain_delta(&a, &cochain)?;
    let dd = ainf_cochain_delta(&a, &d)?;
    let mut out = ManifestBuilder::from_manifest(ctx.resolved.manifest.clone());
    out.add_ainf_cochain(&d, &structure, "delta");
    ctx.emit(out.finish())?;
    let verdict = match dd.maps.iter().find_map(|f| f.witness()) {
        None => Verdict::Pass,
        Some(w) => Verdict::Fail(Failure { check: "δδc = 0".into(), witness: w }),
    };
    Ok(verdict)
}

fn hh_ranks(ctx: &mut Ctx) -> Result<Verdict, CliError> {
    let (dmax, lmax) = truncation(ctx);
    let top = ctx.args.up_to.unwrap_or(3);
    let (_, s) = ctx.pick(&[Kind::Bimodule, Kind::Representation])?;
    let mut rows = Vec::new();
    for n in 0..=top {
        let r = match &s {
            Structure::Bimodule(b) => truncated_delta_ranks(b, n, dmax, lmax).map_err(|e| CliError::Usage(e.to_string()))?,
            Structure::Representation(m) => {
                truncated_lie_delta_ranks(m, n, dmax, lmax).map_err(|e| CliError::Usage(e.to_string()))?
            }
            _ => unreachable!(),
        };
        rows.push(json!({ "n": n, "domain": r.domain, "rank": r.rank, "kernel": r.kernel }));
    }
    ctx.report.insert("truncation".into(), json!({ "dmax": dmax, "lmax": lmax }));
    ctx.report.insert("ranks".into(), Value::Array(rows));
    Ok(Verdict::Pass)
}

fn skeletal(ctx: &mut Ctx) -> Result<Verdict, CliError> {
    let (name, s) = ctx.pick(&[Kind::Cochain])?;
    let Structure::Hochschild { bimodule, cochain } = s else {
        return Err(CliError::Usage("expected a cochain over a bimodule".into()));
    };
    let Structure::Bimodule(b) = ctx.structure_of(&bimodule) else { unreachable!() };
    let Some(theta) = cochain.as_map() else {
        return Err(CliError::Usage("Θ must have arity at least 3".into()));
    };
    if theta.arity < 3 {
        return Err(CliError::Usage("Θ must have arity at least 3".into()));
    }
    let data = SkeletalData::new(b, theta.arity - 1, theta.clone()).map_err(|e| CliError::Usage(e.to_string()))?;
    match skeletal_from_cocycle(&data) {
        Ok(s) => {
            let mut out = ManifestBuilder::new();
            let label = format!("skeletal({name})");
            out.add_ainf(&s, &label);
            if data.n == 2 {
                let x = TwoTermAInf::from_ainf(&s).expect("skeletal 2-term structures are 2-term");
                out.add_two_term(&x, &format!("{label}.2term"));
            }
            ctx.emit(out.finish())?;
            Ok(check_ainf(&s, data.n + 2).into())
        }
        Err(crate::twocells::TwoCellError::NotCocycle(f)) => Ok(Verdict::Fail(f)),
        Err(e) => Err(CliError::Usage(e.to_string())),
    }
}

fn transfer(ctx: &mut Ctx) -> Result<Verdict, CliError> {
    let k = ctx.up_to()?;
    let mode = if ctx.args.general { TreeMode::General } else { TreeMode::Binary };
    let (name, s) = ctx.pick(&[Kind::Contraction])?;
    let Structure::Contraction { contraction, structure } = s else { unreachable!() };
    let Structure::AInf(a) = ctx.structure_of(&structure) else { unreachable!() };
    match transfer_ainf(&contraction, &a, k, mode) {
        Ok(t) => {
            let arities: Vec<usize> = t.mults().keys().copied().collect();
            ctx.report.insert("arities".into(), json!(arities));
            let mut out = ManifestBuilder::new();
            let label = format!("transfer({name})");
            let mname = out.add_module(&t.module, &format!("{label}.module"));
            let mut maps = Vec::new();
            for (k, f) in t.mults() {
                maps.push((format!("mu{k}"), out.add_map(f, &format!("theta{k}"))));
            }
            let mut spec = StructureSpec {
                name: label,
                kind: Kind::Ainf,
                maps: maps.into_iter().collect(),
                refs: BTreeMap::new(),
                modules: BTreeMap::new(),
                element: None,
            };
            if spec.maps.is_empty() {
                spec.modules.insert("module".into(), mname);
            }
            let mut manifest = out.finish();
            manifest.structures.push(spec);
            ctx.emit(manifest)?;
            Ok(check_ainf(&t, k).into())
        }
        Err(crate::transfer::TransferError::Contraction(f)) => Ok(Verdict::Fail(f)),
        Err(e) => Err(CliError::Usage(e.to_string())),
    }
}

/// Byte-exact serialization round trip for every structure, plus `T∘S = id`
/// on 2-term structures and the `Υ` homomorphism on 2-algebras.
fn roundtrip(ctx: &mut Ctx) -> Result<Verdict, CliError> {
    let names: Vec<String> = match &ctx.args.structure {
        Some(n) => {
            ctx.resolved.structure(n).ok_or_else(|| CliError::Usage(format!("no structure named `{n}`")))?;
            vec![n.clone()]
        }
        None => ctx.resolved.structures.iter().map(|(n, _)| n.clone()).collect(),
    };
    let mut rows = Vec::new();
    let mut verdict = Verdict::Pass;
    for name in &names {
        let mut b = ManifestBuilder::new();
        b.add_structure(&ctx.resolved, name);
        let first = b.finish().to_json();
        let again = Resolved::new(Manifest::from_json(&first)?)?;
        let mut b = ManifestBuilder::new();
        b.add_structure(&again, name);
        let second = b.finish().to_json();
        let same = first == second && again.structure(name) == ctx.resolved.structure(name);
        let mut row = json!({ "structure": name, "serialization": if same { "pass" } else { "fail" } });
        if !same {
            verdict = Verdict::FailMsg(format!("serialization of `{name}` is not stable"));
        }
        match ctx.resolved.structure(name) {
            Some(Structure::TwoTerm(x)) => {
                let ok = functor_s(x).ok().and_then(|c| functor_t(&c).ok()).as_ref() == Some(x);
                row["T(S(X)) = X"] = json!(if ok { "pass" } else { "fail" });
                if !ok && matches!(verdict, Verdict::Pass) {
                    verdict = Verdict::FailMsg(format!("T(S({name})) differs from `{name}`"));
                }
            }
            Some(Structure::TwoAlgebra(c)) => {
                let r = upsilon(c).map_err(|e| e.to_string()).and_then(|u| check_two_alg_morphism(&u).map_err(|f| f.to_string()));
                row["Υ homomorphism"] = json!(if r.is_ok() { "pass" } else { "fail" });
                if let (Err(m), Verdict::Pass) = (r, &verdict) {
                    verdict = Verdict::FailMsg(format!("Υ for `{name}`: {m}"));
                }
            }
            _ => {}
        }
        rows.push(row);
    }
    ctx.report.insert("structures".into(), Value::Array(rows));
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ainf::{doubled, phi_extension};
    use crate::assocconf::cur_dual_numbers;
    use crate::confmap::testutil::{graded_module, random_map};
    use crate::lieconf::{virasoro, LInfStructure};
    use proptest::prelude::*;

    fn every_kind() -> Manifest {
        let dual = ConformalBimodule::adjoint(cur_dual_numbers());
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let phi = random_cochain(&dual, 2, 1, 1, 0.5, &mut rng);
        let ext = phi_extension(&dual, phi.as_map().unwrap()).unwrap();
        let x = TwoTermAInf::from_ainf(&doubled(&cur_dual_numbers())).unwrap();
        let rep = ConformalLModule::adjoint(virasoro());
        let mut b = ManifestBuilder::new();
        let alg = b.add_assoc(&cur_dual_numbers(), "A");
        let adj = b.add_bimodule(&dual, &alg, "A.adjoint");
        b.add_cochain(&phi, &dual.module, "bimodule", &adj, "phi");
        b.add_cochain(&Cochain::Zero(ModElement::term(1, "D".parse().unwrap())), &dual.module, "bimodule", &adj, "m");
        let vir = b.add_lie(&virasoro(), "Vir");
        let r = b.add_representation(&rep, &vir, "Vir.adjoint");
        b.add_cochain(&random_lie_cochain(&rep, 1, 1, 1, 1.0, &mut rng), &rep.module, "representation", &r, "psi");
        let e = b.add_ainf(&ext, "A_phi");
        b.add_ainf_cochain(&AInfCochain { maps: vec![ConfMap::identity(ext.module.clone())] }, &e, "id");
        b.add_linf(&skew_symmetrize_ainf(&ext), "L_phi");
        b.add_linf(&LInfStructure::new(ext.module.clone(), BTreeMap::new()).unwrap(), "zero");
        b.add_two_term(&x, "X");
        b.add_two_algebra(&functor_s(&x).unwrap(), "S(X)");
        let c = Contraction::new(
            ConfMap::zero(ext.module.clone(), ext.module.clone(), 1, -1),
            ConfMap::zero(ext.module.clone(), ext.module.clone(), 1, -1),
            ConfMap::identity(ext.module.clone()),
            ConfMap::identity(ext.module.clone()),
            ConfMap::zero(ext.module.clone(), ext.module.clone(), 1, 1),
        )
        .unwrap();
        let dg = ext.mults().iter().filter(|(k, _)| **k != 1).map(|(k, f)| (*k, f.clone())).collect();
        let s = b.add_ainf(&AInfStructure::new(ext.module.clone(), dg).unwrap(), "A_phi.nodiff");
        b.add_contraction(&c, &s, "id");
        b.finish()
    }

    #[test]
    fn every_kind_round_trips() {
        let m = every_kind();
        let text = m.to_json();
        let r = Resolved::new(Manifest::from_json(&text).unwrap()).unwrap();
        let kinds: std::collections::HashSet<Kind> = r.structures.iter().map(|(_, s)| s.kind()).collect();
        assert_eq!(kinds.len(), 10, "{kinds:?}");
        assert_eq!(r.manifest.to_json(), text);
        for (name, s) in &r.structures {
            let mut b = ManifestBuilder::new();
            b.add_structure(&r, name);
            let once = b.finish().to_json();
            let again = Resolved::new(Manifest::from_json(&once).unwrap()).unwrap();
            assert_eq!(again.structure(name), Some(s), "{name}");
            let mut b = ManifestBuilder::new();
            b.add_structure(&again, name);
            assert_eq!(b.finish().to_json(), once, "{name}");
        }
    }

    #[test]
    fn equal_modules_are_shared() {
        let mut b = ManifestBuilder::new();
        b.add_assoc(&cur_dual_numbers(), "A");
        b.add_assoc(&cur_dual_numbers(), "A");
        let m = b.finish();
        assert_eq!(m.modules.len(), 1);
        let names: Vec<&str> = m.structures.iter().map(|s| s.name.as_str()).collect();
        assert_eq!(names, ["A", "A#2"]);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let err = Manifest::from_json(r#"{"modules": [], "extra": 1}"#).unwrap_err();
        assert!(err.to_string().contains("extra"));
    }

    #[test]
    fn cochain_needs_a_base() {
        let mut m = every_kind();
        let phi = m.structures.iter_mut().find(|s| s.name == "phi").unwrap();
        phi.refs.clear();
        let err = Resolved::new(m).unwrap_err().to_string();
        assert!(err.contains("structures[2] `phi`"), "{err}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn maps_round_trip(seed in any::<u64>(), arity in 1usize..=3, degree in -1i32..=1) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = graded_module(&[0, 1, -1]);
            let f = random_map(&mut rng, &m, arity, degree, 2);
            let mut b = ManifestBuilder::new();
            let name = b.add_map(&f, "f");
            let text = b.finish().to_json();
            let r = Resolved::new(Manifest::from_json(&text).unwrap()).unwrap();
            prop_assert_eq!(&r.maps[&name], &f);
            prop_assert_eq!(r.manifest.to_json(), text);
        }
    }
}
