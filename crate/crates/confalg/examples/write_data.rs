//! Regenerates the manifests under `data/`.
//!
//! `cargo run -p confalg --example write_data`

use confalg::ainf::{dga_to_ainf, doubled, phi_extension};
use confalg::assocconf::{cur_dual_numbers, cur_matrix, random_cochain, truncated_cocycles, ConformalBimodule};
use confalg::cli::{Manifest, ManifestBuilder};
use confalg::confmap::ConfMap;
use confalg::confmod::{Generator, GradedModule, ModElement};
use confalg::lieconf::{cur_sl2, virasoro, ConformalLModule};
use confalg::polyring::Poly;
use confalg::transfer::Contraction;
use confalg::twocells::{functor_s, skeletal_from_cocycle, SkeletalData, TwoTermAInf};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::path::Path;
use std::sync::Arc;

fn module(gens: &[(&str, i32)]) -> Arc<GradedModule> {
    Arc::new(GradedModule::new(gens.iter().map(|(n, d)| Generator { name: n.to_string(), degree: *d }).collect()).unwrap())
}

fn linear(src: &Arc<GradedModule>, tgt: &Arc<GradedModule>, degree: i32, table: &[(usize, usize)]) -> ConfMap {
    let mut f = ConfMap::zero(src.clone(), tgt.clone(), 1, degree);
    for &(x, y) in table {
        f.set(vec![x], ModElement::generator(y)).unwrap();
    }
    f
}

/// `A = ⟨a, c, y⟩₋₁ ⊕ ⟨b, e, x⟩₋₂ ⊕ ⟨u⟩₀` with `dc = b`, `dy = x` and
/// `a·a = b`, `c·a = x`, `a·c = ∂e`, `y·a = λe`, `u·u = u`, contracted onto
/// `H = ⟨a, e, u⟩` by `h(b) = c`, `h(x) = y`.
fn rank3_contraction() -> (confalg::ainf::AInfStructure, Contraction) {
    let a = module(&[("a", -1), ("b", -2), ("c", -1), ("e", -2), ("x", -2), ("y", -1), ("u", 0)]);
    let d = linear(&a, &a, -1, &[(2, 1), (5, 4)]);
    let mut mult = ConfMap::zero(a.clone(), a.clone(), 2, 0);
    for ((l, r), z, c) in [((0, 0), 1, "1"), ((2, 0), 4, "1"), ((0, 2), 3, "D"), ((5, 0), 3, "L1"), ((6, 6), 6, "1")] {
        mult.set(vec![l, r], ModElement::term(z, c.parse::<Poly>().unwrap())).unwrap();
    }
    let st = dga_to_ainf(a.clone(), &d, &mult).unwrap();
    let hm = module(&[("a", -1), ("e", -2), ("u", 0)]);
    let c = Contraction::new(
        d,
        ConfMap::zero(hm.clone(), hm.clone(), 1, -1),
        linear(&a, &hm, 0, &[(0, 0), (3, 1), (6, 2)]),
        linear(&hm, &a, 0, &[(0, 0), (1, 3), (2, 6)]),
        linear(&a, &a, 1, &[(1, 2), (4, 5)]),
    )
    .unwrap();
    (st, c)
}

fn write(dir: &Path, file: &str, m: Manifest) {
    std::fs::write(dir.join(file), m.to_json()).unwrap();
}

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    std::fs::create_dir_all(&dir).unwrap();

    let mut b = ManifestBuilder::new();
    let vir = b.add_lie(&virasoro(), "Vir");
    b.add_representation(&ConformalLModule::adjoint(virasoro()), &vir, "Vir.adjoint");
    write(&dir, "virasoro.json", b.finish());

    let mut b = ManifestBuilder::new();
    let sl2 = b.add_lie(&cur_sl2(), "Cur(sl2)");
    b.add_representation(&ConformalLModule::adjoint(cur_sl2()), &sl2, "Cur(sl2).adjoint");
    write(&dir, "cur-sl2.json", b.finish());

    let mut b = ManifestBuilder::new();
    let mat = b.add_assoc(&cur_matrix(2), "Cur(Mat2)");
    b.add_bimodule(&ConformalBimodule::adjoint(cur_matrix(2)), &mat, "Cur(Mat2).adjoint");
    write(&dir, "cur-mat2.json", b.finish());

    let dual = ConformalBimodule::adjoint(cur_dual_numbers());
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let phi = random_cochain(&dual, 2, 1, 1, 0.5, &mut rng);
    let theta = truncated_cocycles(&dual, 3, 1, 1)
        .unwrap()
        .into_iter()
        .find(|c| !c.is_zero())
        .expect("a nonzero 3-cocycle");

    let mut b = ManifestBuilder::new();
    let alg = b.add_assoc(&cur_dual_numbers(), "Cur(Q[e])");
    let adj = b.add_bimodule(&dual, &alg, "Cur(Q[e]).adjoint");
    b.add_cochain(&phi, &dual.module, "bimodule", &adj, "phi");
    write(&dir, "cur-dual-numbers.json", b.finish());

    let ext = phi_extension(&dual, phi.as_map().unwrap()).unwrap();
    let mut b = ManifestBuilder::new();
    b.add_ainf(&ext, "A_phi");
    b.add_two_term(&TwoTermAInf::from_ainf(&ext).unwrap(), "A_phi.2term");
    write(&dir, "phi-extension.json", b.finish());

    let mut b = ManifestBuilder::new();
    let alg = b.add_assoc(&cur_dual_numbers(), "Cur(Q[e])");
    let adj = b.add_bimodule(&dual, &alg, "Cur(Q[e]).adjoint");
    b.add_cochain(&theta, &dual.module, "bimodule", &adj, "Theta");
    write(&dir, "skeletal-3cocycle.json", b.finish());

    let (st, c) = rank3_contraction();
    let mut b = ManifestBuilder::new();
    let s = b.add_ainf(&st, "A");
    b.add_contraction(&c, &s, "A→H");
    write(&dir, "contraction-rank3.json", b.finish());

    let mut b = ManifestBuilder::new();
    let skel = skeletal_from_cocycle(&SkeletalData::new(dual.clone(), 2, theta.as_map().unwrap().clone()).unwrap()).unwrap();
    let corpus = [
        ("skeletal", TwoTermAInf::from_ainf(&skel).unwrap()),
        ("A_phi", TwoTermAInf::from_ainf(&ext).unwrap()),
        ("doubled", TwoTermAInf::from_ainf(&doubled(&cur_dual_numbers())).unwrap()),
    ];
    for (name, x) in &corpus {
        b.add_two_term(x, name);
    }
    for (name, x) in &corpus {
        b.add_two_algebra(&functor_s(x).unwrap(), &format!("S({name})"));
    }
    write(&dir, "two-algebra-roundtrip.json", b.finish());
}
