//! Three-valued signal semantics against a cell oracle, and engine properties
//! on random models.

mod common;

use common::*;
use ctxcheck::{check, CheckConfig, Checker, Logic, Mode, Truth};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const CELL: f64 = 0.5;

fn cell(x: f64) -> usize {
    (x / CELL).floor() as usize
}

/// Kleene `φ U[a,b] ψ` at an off-grid `t`, straight from the definition.
fn oracle_until(phi: &[Truth], psi: &[Truth], a: f64, b: f64, t: f64) -> Truth {
    let len = phi.len() as f64 * CELL;
    if t + a >= len {
        return Truth::False;
    }
    let mut best = Truth::False;
    let mut along = Truth::True;
    for k in cell(t)..=cell(t + b).min(phi.len() - 1) {
        along = along.min(phi[k]);
        if k >= cell(t + a) {
            best = best.max(along.min(psi[k]));
        }
    }
    best
}

#[test]
fn three_valued_until_matches_definition() {
    let mut rng = StdRng::seed_from_u64(31);
    for _ in 0..300 {
        let n = rng.random_range(2..=20);
        let c1 = random_cells(&mut rng, n, 8, true);
        let c2 = random_cells(&mut rng, n, 8, true);
        let (s1, s2) = (cells_to_signal(&c1, CELL), cells_to_signal(&c2, CELL));
        let a = rng.random_range(0..=4) as f64 * CELL;
        let b = a + rng.random_range(0..=4) as f64 * CELL;
        let u = s1.until(&s2, a, b, Logic::Kleene).unwrap();
        let e = s1.eventually(a, b).unwrap();
        for k in 0..n * 4 {
            let t = (k as f64 + 0.5) * CELL / 4.0;
            assert_eq!(
                u.value_at(t).unwrap(),
                oracle_until(&c1, &c2, a, b, t),
                "t={t}"
            );
            let all_true = vec![Truth::True; n];
            assert_eq!(
                e.value_at(t).unwrap(),
                oracle_until(&all_true, &c1, a, b, t)
            );
        }
    }
}

#[test]
fn strict_logic_is_never_more_definite_than_kleene() {
    let mut rng = StdRng::seed_from_u64(32);
    for _ in 0..300 {
        let n = rng.random_range(2..=20);
        let s1 = cells_to_signal(&random_cells(&mut rng, n, 8, true), CELL);
        let s2 = cells_to_signal(&random_cells(&mut rng, n, 8, true), CELL);
        let pairs = [
            (
                s1.conjoin(&s2, Logic::Strict).unwrap(),
                s1.conjoin(&s2, Logic::Kleene).unwrap(),
            ),
            (
                s1.disjoin(&s2, Logic::Strict).unwrap(),
                s1.disjoin(&s2, Logic::Kleene).unwrap(),
            ),
        ];
        for (strict, kleene) in pairs {
            for k in 0..n * 2 {
                let t = (k as f64 + 0.5) * CELL / 2.0;
                let v = strict.value_at(t).unwrap();
                assert!(!v.is_definite() || v == kleene.value_at(t).unwrap());
            }
        }
    }
}

#[test]
fn engines_agree_on_random_models() {
    for seed in 0..40u64 {
        let mut rng = StdRng::seed_from_u64(500 + seed);
        let net = random_network(&mut rng);
        let species: Vec<String> = net.species().names().to_vec();
        let contexts = vec![("Q".to_string(), random_context(&mut rng, &net))];
        let gen = FormulaGen {
            species: &species,
            contexts: &contexts,
        };
        let depth = rng.random_range(1..=3);
        let phi = gen.formula(&mut rng, depth);
        let p = random_process(&mut rng, &net, 0.2, 2.0);
        let cfg = |mode, logic| CheckConfig {
            rho: 0.05,
            mode,
            logic,
            ..CheckConfig::default()
        };
        for logic in [Logic::Kleene, Logic::Strict] {
            let pw = check(&p, &phi, cfg(Mode::Pointwise, logic)).unwrap();
            let sens = check(&p, &phi, cfg(Mode::Sensitive, logic)).unwrap();
            assert_eq!(pw.verdict, pw.signal.value_at(0.0).unwrap());
            assert_eq!(sens.verdict, sens.signal.value_at(0.0).unwrap());
            assert!(pw.verdict.is_definite());
            if sens.verdict.is_definite() {
                assert_eq!(pw.verdict, sens.verdict, "seed {seed}: {phi}");
            }
            assert!(
                sens.solver_calls <= pw.solver_calls.max(1) * 2,
                "seed {seed}"
            );
        }
    }
}

#[test]
fn definite_ball_verdicts_hold_at_sampled_points() {
    let mut rng = StdRng::seed_from_u64(33);
    let mut audited = 0;
    for _ in 0..400 {
        let net = random_network(&mut rng);
        let species: Vec<String> = net.species().names().to_vec();
        let contexts = vec![("Q".to_string(), random_context(&mut rng, &net))];
        let gen = FormulaGen {
            species: &species,
            contexts: &contexts,
        };
        let phi = gen.formula(&mut rng, 2);
        let ball = ctxcheck::Ball::new(
            random_state(&mut rng, net.dim(), 0.3, 2.0),
            rng.random_range(0.0..0.05),
        );
        let mut ck = Checker::new(CheckConfig {
            rho: 0.05,
            ..CheckConfig::default()
        })
        .unwrap();
        let v = ck.sat_ball(&ball, &net, &phi).unwrap();
        if !v.is_definite() {
            continue;
        }
        audited += 1;
        for _ in 0..20 {
            let x = sample_in_ball(&mut rng, &ball);
            let p = ctxcheck::Process::new(net.clone(), x).unwrap();
            assert_eq!(Truth::from_bool(ck.sat(&p, &phi).unwrap()), v, "{phi}");
        }
    }
    assert!(audited > 100);
}
