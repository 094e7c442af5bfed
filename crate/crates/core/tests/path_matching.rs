use algmatch::field::PrimeField;
use algmatch::gen::random_bpm_instance;
use algmatch::oracles::oracle_bpm_exists;
use algmatch::pathmatch::{bpm_exists, solve_bpm, verify_bpm, PathMatchError, SolverConfig};

#[test]
fn existence_agrees_with_enumeration() {
    let f = PrimeField::default();
    let (mut yes, mut no) = (0, 0);
    for seed in 0..60u64 {
        let t = seed as usize % 3;
        let r = if t == 0 { 0 } else { 1 + seed as usize % t };
        let s = (seed as usize * 3) % 7;
        let inst = random_bpm_instance(f, t, s, r, 0.45, seed);
        let truth = oracle_bpm_exists(&inst).unwrap();
        assert_eq!(bpm_exists(&inst, seed), truth, "seed {seed}");
        match solve_bpm(&inst, &SolverConfig::with_seed(seed)) {
            Ok(sol) => {
                assert!(truth);
                verify_bpm(&inst, &sol.edges).unwrap();
                yes += 1;
            }
            Err(PathMatchError::NoBpm) => {
                assert!(!truth);
                no += 1;
            }
            Err(e) => panic!("seed {seed}: {e}"),
        }
    }
    assert!(yes > 5 && no > 5, "{yes} positive, {no} negative instances");
}
