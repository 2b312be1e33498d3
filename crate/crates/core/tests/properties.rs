mod common;

use common::{random_circuit, reference_depths, CLASSICAL};
use proptest::prelude::*;
use qflt::circuit::{analyze, analyze_decomposed, decompose, text, GateKind};
use qflt::flt::{build, plan, Variant};
use qflt::gf2x::{BinaryPoly, FieldSpec};
use qflt::linsynth::{synth_cnot, GF2Matrix};
use qflt::revsim::{run_basis, BasisState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn field_strategy() -> impl Strategy<Value = FieldSpec> {
    (2usize..=96).prop_map(|n| FieldSpec::default_for_degree(n).unwrap())
}

fn elements(f: &FieldSpec, seed: u64, k: usize) -> Vec<BinaryPoly> {
    let mut r = rng(seed);
    (0..k).map(|_| BinaryPoly::random(f.n(), &mut r)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(f in field_strategy(), seed in any::<u64>()) {
        let v = elements(&f, seed, 3);
        let (a, b, c) = (&v[0], &v[1], &v[2]);
        let ab = f.mul(a, b).unwrap();
        prop_assert_eq!(&ab, &f.mul(b, a).unwrap());
        prop_assert_eq!(f.mul(&ab, c).unwrap(), f.mul(a, &f.mul(b, c).unwrap()).unwrap());
        prop_assert_eq!(
            f.mul(a, &b.add(c)).unwrap(),
            f.mul(a, b).unwrap().add(&f.mul(a, c).unwrap())
        );
        // the Frobenius map is additive
        prop_assert_eq!(f.square(&a.add(b)).unwrap(), f.square(a).unwrap().add(&f.square(b).unwrap()));
    }

    #[test]
    fn three_inverses_agree(f in field_strategy(), seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = BinaryPoly::random_nonzero(f.n(), &mut r);
        let inv = f.inv_eea(&a).unwrap();
        prop_assert!(f.mul(&a, &inv).unwrap().is_one());
        prop_assert_eq!(&f.inv_flt_classical(&a).unwrap(), &inv);
        prop_assert_eq!(&f.inv_itoh_tsujii(&a).unwrap(), &inv);
    }

    #[test]
    fn hex_round_trip(seed in any::<u64>(), bits in 0usize..600) {
        let p = BinaryPoly::random(bits, &mut rng(seed));
        prop_assert_eq!(BinaryPoly::from_hex(&p.to_hex()).unwrap(), p);
    }

    #[test]
    fn plan_reconstructs_exponent(n in 2usize..100_000) {
        let p = plan(n).unwrap();
        prop_assert_eq!(p.ks.iter().map(|&k| 1usize << k).sum::<usize>(), n - 1);
        prop_assert!(p.ks.windows(2).all(|w| w[0] > w[1]));
        prop_assert_eq!(p.mult_count, p.k1 + p.t - 1);
    }

    #[test]
    fn depth_matches_reference(seed in any::<u64>(), width in 3usize..=16, len in 0usize..=200) {
        let c = random_circuit(&mut rng(seed), width, len, &GateKind::ALL);
        let r = analyze(&c);
        prop_assert_eq!((r.overall_depth, r.t_depth), reference_depths(&c));
        prop_assert!(r.overall_depth >= r.t_depth);
    }

    #[test]
    fn compose_depth_is_subadditive(seed in any::<u64>(), width in 3usize..=12) {
        let mut r = rng(seed);
        let (la, lb) = (r.gen_range(0..80), r.gen_range(0..80));
        let a = random_circuit(&mut r, width, la, &GateKind::ALL);
        let b = random_circuit(&mut r, width, lb, &GateKind::ALL);
        let ab = a.compose(&b).unwrap();
        prop_assert!(analyze(&ab).overall_depth <= analyze(&a).overall_depth + analyze(&b).overall_depth);
        prop_assert_eq!(ab.len(), a.len() + b.len());
    }

    #[test]
    fn decomposition_t_count(seed in any::<u64>(), width in 3usize..=12) {
        let c = random_circuit(&mut rng(seed), width, 60, &CLASSICAL);
        let toffolis = c.gates().iter().filter(|g| g.kind() == GateKind::Toffoli).count() as u64;
        let d = decompose(&c);
        prop_assert!(d.gates().iter().all(|g| !matches!(g.kind(), GateKind::Toffoli | GateKind::Swap)));
        let rep = analyze_decomposed(&c);
        prop_assert_eq!(rep.t_count, 7 * toffolis);
        prop_assert_eq!(&rep, &analyze(&d));
    }

    #[test]
    fn inverse_undoes_classical_circuits(seed in any::<u64>(), width in 3usize..=20) {
        let mut r = rng(seed);
        let c = random_circuit(&mut r, width, 100, &CLASSICAL);
        let bits: Vec<bool> = (0..width).map(|_| r.gen()).collect();
        let x = BasisState::from_bits(&bits);
        let y = run_basis(&c, &x).unwrap();
        prop_assert_eq!(run_basis(&c.inverse(), &y).unwrap(), x.clone());
        prop_assert_eq!(run_basis(&c.compose(&c.inverse()).unwrap(), &x).unwrap(), x);
    }

    #[test]
    fn text_round_trip(seed in any::<u64>(), width in 3usize..=10) {
        let c = random_circuit(&mut rng(seed), width, 50, &GateKind::ALL);
        let d = decompose(&c);
        for circ in [c, d] {
            prop_assert_eq!(text::parse(&text::emit(&circ)).unwrap().circuit, circ);
        }
    }

    #[test]
    fn cnot_synthesis_realizes_matrix(seed in any::<u64>(), n in 1usize..=24) {
        let mut r = rng(seed);
        let m = GF2Matrix::random_invertible(n, &mut r);
        let c = synth_cnot(&m).unwrap();
        prop_assert!(c.len() <= n * n);
        for _ in 0..8 {
            let v: Vec<bool> = (0..n).map(|_| r.gen()).collect();
            prop_assert_eq!(run_basis(&c, &BasisState::from_bits(&v)).unwrap().bits(), m.mul_vec(&v));
        }
    }

    #[test]
    fn waterfall_and_baseline_share_t_count(n in 2usize..=40) {
        let f = FieldSpec::default_for_degree(n).unwrap();
        let w = analyze_decomposed(&build(Variant::Waterfall, &f).unwrap().circuit);
        let b = analyze_decomposed(&build(Variant::Baseline, &f).unwrap().circuit);
        prop_assert_eq!(w.t_count, b.t_count);
        prop_assert!(w.t_depth <= b.t_depth);
        prop_assert!(w.width >= b.width);
    }
}
