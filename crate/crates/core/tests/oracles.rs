//! Golden values from an independent brute force over O_K/mO_K for the
//! quadratic corpus fields, written in a different language with its own
//! arithmetic. Norms of gcds there are lattice indices computed from 2x2
//! minors, with no ideal factorization involved.

use std::sync::Arc;

use menon::arith::{euler_phi, phi_k_bruteforce, phi_k_formula, FuncSpec};
use menon::characters::Character;
use menon::cyclotomic::CycInt;
use menon::identity::{verify, Budgets, Evaluator, IdentityParams};
use menon::ideals::Ideal;
use menon::numfield::{load_corpus, NumberField};
use menon::residue::ResidueRing;
use num_bigint::BigInt;

/// (field, m, k, s, φ(⟨m⟩), φ_k(⟨m⟩), sum with f = N, sum with f = 1), r = 1, trivial χ.
type Row = (&'static str, i64, u32, u32, u64, u64, u64, u64);

const FROZEN: &[Row] = &[
    ("Q(i)", 2, 1, 0, 2, 2, 6, 2),
    ("Q(i)", 2, 1, 1, 2, 2, 14, 8),
    ("Q(i)", 2, 2, 0, 2, 0, 0, 0),
    ("Q(i)", 2, 2, 1, 2, 0, 0, 0),
    ("Q(i)", 3, 1, 0, 8, 8, 16, 8),
    ("Q(i)", 3, 1, 1, 8, 8, 80, 72),
    ("Q(i)", 3, 2, 0, 8, 56, 112, 56),
    ("Q(i)", 3, 2, 1, 8, 56, 560, 504),
    ("Q(i)", 4, 1, 0, 8, 8, 40, 8),
    ("Q(i)", 4, 1, 1, 8, 8, 248, 128),
    ("Q(i)", 4, 2, 0, 8, 0, 0, 0),
    ("Q(i)", 4, 2, 1, 8, 0, 0, 0),
    ("Q(i)", 5, 1, 0, 16, 16, 64, 16),
    ("Q(i)", 5, 1, 1, 16, 16, 576, 400),
    ("Q(i)", 5, 2, 0, 16, 144, 576, 144),
    ("Q(i)", 5, 2, 1, 16, 144, 5184, 3600),
    ("Q(i)", 6, 1, 0, 16, 16, 96, 16),
    ("Q(i)", 6, 1, 1, 16, 16, 1120, 576),
    ("Q(i)", 6, 2, 0, 16, 0, 0, 0),
    ("Q(i)", 6, 2, 1, 16, 0, 0, 0),
    ("Q(i)", 7, 1, 0, 48, 48, 96, 48),
    ("Q(i)", 7, 1, 1, 48, 48, 2400, 2352),
    ("Q(i)", 7, 2, 0, 48, 2256, 4512, 2256),
    ("Q(i)", 7, 2, 1, 48, 2256, 112800, 110544),
    ("Q(sqrt-5)", 2, 1, 0, 2, 2, 6, 2),
    ("Q(sqrt-5)", 2, 1, 1, 2, 2, 14, 8),
    ("Q(sqrt-5)", 2, 2, 0, 2, 0, 0, 0),
    ("Q(sqrt-5)", 2, 2, 1, 2, 0, 0, 0),
    ("Q(sqrt-5)", 3, 1, 0, 4, 4, 16, 4),
    ("Q(sqrt-5)", 3, 1, 1, 4, 4, 64, 36),
    ("Q(sqrt-5)", 3, 2, 0, 4, 4, 16, 4),
    ("Q(sqrt-5)", 3, 2, 1, 4, 4, 64, 36),
    ("Q(sqrt-5)", 4, 1, 0, 8, 8, 40, 8),
    ("Q(sqrt-5)", 4, 1, 1, 8, 8, 248, 128),
    ("Q(sqrt-5)", 4, 2, 0, 8, 0, 0, 0),
    ("Q(sqrt-5)", 4, 2, 1, 8, 0, 0, 0),
    ("Q(sqrt-5)", 5, 1, 0, 20, 20, 60, 20),
    ("Q(sqrt-5)", 5, 1, 1, 20, 20, 620, 500),
    ("Q(sqrt-5)", 5, 2, 0, 20, 300, 900, 300),
    ("Q(sqrt-5)", 5, 2, 1, 20, 300, 9300, 7500),
    ("Q(sqrt-5)", 6, 1, 0, 8, 8, 96, 8),
    ("Q(sqrt-5)", 6, 1, 1, 8, 8, 896, 288),
    ("Q(sqrt-5)", 6, 2, 0, 8, 0, 0, 0),
    ("Q(sqrt-5)", 6, 2, 1, 8, 0, 0, 0),
    ("Q(sqrt-5)", 7, 1, 0, 36, 36, 144, 36),
    ("Q(sqrt-5)", 7, 1, 1, 36, 36, 2304, 1764),
    ("Q(sqrt-5)", 7, 2, 0, 36, 900, 3600, 900),
    ("Q(sqrt-5)", 7, 2, 1, 36, 900, 57600, 44100),
    ("Q(sqrt5)", 2, 1, 0, 3, 3, 6, 3),
    ("Q(sqrt5)", 2, 1, 1, 3, 3, 15, 12),
    ("Q(sqrt5)", 2, 2, 0, 3, 6, 12, 6),
    ("Q(sqrt5)", 2, 2, 1, 3, 6, 30, 24),
    ("Q(sqrt5)", 3, 1, 0, 8, 8, 16, 8),
    ("Q(sqrt5)", 3, 1, 1, 8, 8, 80, 72),
    ("Q(sqrt5)", 3, 2, 0, 8, 56, 112, 56),
    ("Q(sqrt5)", 3, 2, 1, 8, 56, 560, 504),
    ("Q(sqrt5)", 4, 1, 0, 12, 12, 36, 12),
    ("Q(sqrt5)", 4, 1, 1, 12, 12, 252, 192),
    ("Q(sqrt5)", 4, 2, 0, 12, 96, 288, 96),
    ("Q(sqrt5)", 4, 2, 1, 12, 96, 2016, 1536),
    ("Q(sqrt5)", 5, 1, 0, 20, 20, 60, 20),
    ("Q(sqrt5)", 5, 1, 1, 20, 20, 620, 500),
    ("Q(sqrt5)", 5, 2, 0, 20, 300, 900, 300),
    ("Q(sqrt5)", 5, 2, 1, 20, 300, 9300, 7500),
    ("Q(sqrt5)", 6, 1, 0, 24, 24, 96, 24),
    ("Q(sqrt5)", 6, 1, 1, 24, 24, 1200, 864),
    ("Q(sqrt5)", 6, 2, 0, 24, 336, 1344, 336),
    ("Q(sqrt5)", 6, 2, 1, 24, 336, 16800, 12096),
    ("Q(sqrt5)", 7, 1, 0, 48, 48, 96, 48),
    ("Q(sqrt5)", 7, 1, 1, 48, 48, 2400, 2352),
    ("Q(sqrt5)", 7, 2, 0, 48, 2256, 4512, 2256),
    ("Q(sqrt5)", 7, 2, 1, 48, 2256, 112800, 110544),
];

fn corpus() -> Vec<Arc<NumberField>> {
    load_corpus(&std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data/fields.json")).unwrap()
}

#[test]
fn frozen_quadratic_values() {
    let fields = corpus();
    for &(name, m, k, s, phi, phi_k, sum_norm, sum_one) in FROZEN {
        let field = fields.iter().find(|f| f.name() == name).unwrap();
        let n = Ideal::from_int(field, m).unwrap();
        let ring = Arc::new(ResidueRing::new(&n).unwrap());
        assert_eq!(euler_phi(&n), BigInt::from(phi), "{name} m={m}");
        assert_eq!(phi_k_formula(&n, k).unwrap(), BigInt::from(phi_k), "{name} m={m} k={k}");
        assert_eq!(phi_k_bruteforce(&ring, k).unwrap(), BigInt::from(phi_k));
        let chi = Character::trivial(&ring);
        for (f, want) in [(FuncSpec::Norm, sum_norm), (FuncSpec::One, sum_one)] {
            let table = f.tabulate(ring.lattice()).unwrap();
            let p = IdentityParams::new(&ring, k, s, field.one(), &chi, table).unwrap();
            let rec = verify(&p, &Evaluator::ALL, &Budgets::default()).unwrap();
            assert!(rec.equal, "{name} m={m} k={k} s={s}");
            assert_eq!(rec.lhs.coeffs, vec![serde_json::Value::from(want)], "{name} m={m} k={k} s={s} f={}", f.name());
        }
    }
}

#[test]
fn hand_values() {
    let fields = corpus();
    let gauss = fields.iter().find(|f| f.name() == "Q(i)").unwrap();
    let three = Ideal::from_int(gauss, 3).unwrap();
    let ring = Arc::new(ResidueRing::new(&three).unwrap());
    let chi = Character::trivial(&ring);
    let norm = FuncSpec::Norm.tabulate(ring.lattice()).unwrap();
    let p = IdentityParams::new(&ring, 2, 0, gauss.one(), &chi, norm).unwrap();
    let rec = verify(&p, &Evaluator::ALL, &Budgets::default()).unwrap();
    assert!(rec.equal);
    assert_eq!(menon::identity::rhs_closed(&p).unwrap(), CycInt::from_int(1, 112));
}
