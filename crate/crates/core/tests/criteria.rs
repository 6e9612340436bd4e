use bound_ent::criteria::{ppt_check, realignment_check, realignment_value, Outcome, DEFAULT_TOL};
use bound_ent::linalg::kron;
use bound_ent::linalg::random::{random_unit_vector, random_unitary};
use bound_ent::states::{make_state, BipartiteState, FamilyParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn grid(d: usize) -> impl Iterator<Item = FamilyParams> {
    let axis = [0.0, 0.25, 0.5, 0.75, 1.0];
    let total = 5usize.pow(d as u32);
    (0..total).map(move |mut flat| {
        let mut v: Vec<f64> = (0..d)
            .map(|_| {
                let x = axis[flat % 5];
                flat /= 5;
                x
            })
            .collect();
        let a = v.remove(0);
        FamilyParams::new(d, a, v).unwrap()
    })
}

#[test]
fn family_is_never_detected_by_ppt() {
    for d in [3, 4] {
        for p in grid(d) {
            let v = ppt_check(&make_state(&p).unwrap(), DEFAULT_TOL).unwrap();
            assert_eq!(v.outcome, Outcome::NotDetected, "{p:?}: {}", v.evidence);
            assert!(v.evidence >= -1e-10);
        }
    }
}

#[test]
fn realignment_invariant_under_local_unitaries() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let rho = make_state(&FamilyParams::new(3, 0.8, vec![0.1, 0.9]).unwrap()).unwrap();
    let base = realignment_value(&rho).unwrap();
    for _ in 0..5 {
        let u = kron(&random_unitary(&mut rng, 3), &random_unitary(&mut rng, 3));
        let moved = realignment_value(&rho.conjugated(&u).unwrap()).unwrap();
        assert!((moved - base).abs() <= 1e-10, "{moved} vs {base}");
    }
}

#[test]
fn separable_constructions_stay_below_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..10 {
        let l: Vec<f64> = (0..2).map(|_| rng.gen()).collect();
        let rho = make_state(&FamilyParams::new(3, 0.0, l).unwrap()).unwrap();
        assert!(realignment_value(&rho).unwrap() <= 1.0 + 1e-10);
    }
    for (da, db) in [(2, 2), (2, 3), (3, 3), (4, 2)] {
        let psi = bound_ent::linalg::kron_vec(&random_unit_vector(&mut rng, da), &random_unit_vector(&mut rng, db));
        let rho = BipartiteState::pure(&psi, da, db).unwrap();
        let v = realignment_check(&rho, DEFAULT_TOL).unwrap();
        assert!(v.evidence <= 1.0 + 1e-10, "{}", v.evidence);
        assert_eq!(v.outcome, Outcome::NotDetected);
    }
}

#[test]
fn verdicts_are_deterministic() {
    let rho = make_state(&FamilyParams::new(4, 0.6, vec![0.2, 0.4, 0.8]).unwrap()).unwrap();
    for check in [ppt_check, realignment_check] {
        let a = check(&rho, DEFAULT_TOL).unwrap();
        let b = check(&rho, DEFAULT_TOL).unwrap();
        assert_eq!(a.evidence.to_bits(), b.evidence.to_bits());
    }
}
