use meanval_core::apps::{bound_report, delta_rd};
use meanval_core::engine::kernel::{build_table, PointSet, Strategy as BuildStrategy, TableSpec};
use meanval_core::engine::mean::{mean_value_over, system_points};
use meanval_core::engine::{AmpValue, GaussInt};
use meanval_core::padic::{check_u_holder, class_refinement_sides, PadicContext, ResidueWeightSeq};
use meanval_core::{
    brute_force_mean_value, build_rep_table, is_pc_spaced, mean_value, tdi_map, wronskian, EngineConfig,
    IntPolynomial, PolynomialSystem, Solution, Value, WeightSeq,
};
use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use proptest::prelude::*;

fn cfg() -> EngineConfig {
    EngineConfig::default()
}

fn count(v: &Value) -> BigInt {
    v.as_integer().expect("count mode is exact").clone()
}

/// `t^j + p^c g_j(t)` with small random `g_j`.
fn spaced_system(p: u64, c: u32, k: usize, noise: &[i64]) -> PolynomialSystem {
    let pc = (p as i64).pow(c);
    let polys = (1..=k)
        .map(|j| {
            let mut co = vec![0i64; k + 2];
            co[j] = 1;
            for (i, c) in co.iter_mut().enumerate() {
                *c += pc * noise[(j * 7 + i) % noise.len()];
            }
            IntPolynomial::from_i64s(&co)
        })
        .collect();
    PolynomialSystem::new(polys).unwrap()
}

fn system_strategy() -> impl Strategy<Value = PolynomialSystem> {
    (1usize..=3, prop::sample::select(vec![5u64, 7]), proptest::collection::vec(-2i64..=2, 8), any::<bool>()).prop_map(
        |(k, p, noise, vin)| {
            if vin {
                PolynomialSystem::vinogradov(k)
            } else {
                spaced_system(p, 1, k, &noise)
            }
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn mass_and_lower_bounds(sys in system_strategy(), lo in -4i64..4, len in 1i64..=6, s in 1usize..=3) {
        let hi = lo + len - 1;
        let table = build_rep_table(&sys, (lo, hi), s, None, &cfg()).unwrap();
        let mass = match table.mass() {
            AmpValue::Count(c) => c,
            other => panic!("{other:?}"),
        };
        let n = BigUint::from(len as u64).pow(s as u32);
        prop_assert_eq!(&mass, &n);
        let j = count(&mean_value(&sys, (lo, hi), s, None, false, &cfg()).unwrap().value);
        prop_assert!(j >= BigInt::from(n.clone()));
        // Cauchy-Schwarz: J * #entries >= mass^2
        prop_assert!(j * BigInt::from(table.len()) >= BigInt::from(&mass * &mass));
    }

    #[test]
    fn oracle_equivalence(sys in system_strategy(), lo in -3i64..3, len in 1i64..=6, s in 1usize..=3) {
        let hi = lo + len - 1;
        let fast = mean_value(&sys, (lo, hi), s, None, false, &cfg()).unwrap();
        let slow = brute_force_mean_value(&sys, (lo, hi), s, None, false, 1 << 34).unwrap();
        prop_assert_eq!(fast.value, slow.value);
    }

    #[test]
    fn strategies_agree(sys in system_strategy(), len in 1i64..=9, s in 1usize..=4) {
        let xs: Vec<i64> = (1..=len).collect();
        let spec = TableSpec::single(sys.k(), None, PointSet::unweighted(system_points(&sys, &xs)), s);
        let enumerate = EngineConfig { strategy: BuildStrategy::Enumerate, ..cfg() };
        let convolve = EngineConfig { strategy: BuildStrategy::Convolve, ..cfg() };
        let a = build_table(&spec, &enumerate).unwrap();
        let b = build_table(&spec, &convolve).unwrap();
        prop_assert_eq!(a.len(), b.len());
        let ea: Vec<_> = a.iter().collect();
        let eb: Vec<_> = b.iter().collect();
        prop_assert_eq!(ea, eb);
    }

    #[test]
    fn all_ones_weights_match_counts(sys in system_strategy(), len in 1i64..=6, s in 1usize..=3) {
        let w = WeightSeq::indicator(1, len).unwrap();
        let weighted = mean_value(&sys, (1, len), s, Some(&w), false, &cfg()).unwrap();
        let plain = mean_value(&sys, (1, len), s, None, false, &cfg()).unwrap();
        prop_assert_eq!(weighted.value, plain.value);
    }

    #[test]
    fn progressions_match_intervals(k in 1usize..=3, q in 1i64..=5, xi in -5i64..=5, x in 1i64..=8, s in 1usize..=3) {
        let sys = PolynomialSystem::vinogradov(k);
        let prog: Vec<BigInt> = (1..=x).map(|n| BigInt::from(q * n + xi)).collect();
        let a = mean_value_over(&sys, &prog, s, &cfg()).unwrap();
        let b = count(&mean_value(&sys, (1, x), s, None, false, &cfg()).unwrap().value);
        prop_assert_eq!(BigInt::from(a), b);
    }

    #[test]
    fn spaced_wronskian_survives_reduction(p in prop::sample::select(vec![5u64, 7, 11]), c in 1u32..=2, k in 1usize..=4,
                                           noise in proptest::collection::vec(-3i64..=3, 10)) {
        let sys = spaced_system(p, c, k, &noise);
        prop_assert!(is_pc_spaced(&sys, p, c).unwrap());
        let w = wronskian(&sys);
        prop_assert!(!w.reduce_mod(&BigInt::from(p)).is_zero());
    }

    #[test]
    fn delta_is_nonincreasing(mut degs in proptest::collection::btree_set(1u64..40, 1..8), r in 0u64..40) {
        let degs: Vec<u64> = std::mem::take(&mut degs).into_iter().rev().collect();
        prop_assert!(delta_rd(r + 1, &degs).unwrap() <= delta_rd(r, &degs).unwrap());
    }

    #[test]
    fn congruence_holder(k in 1usize..=2, p in prop::sample::select(vec![3u64, 5]), b in 1u32..=3, s in 1usize..=3,
                         w in proptest::collection::vec((-2i128..=2, -2i128..=2), 1..14), lo in -10i64..10) {
        let sys = PolynomialSystem::vinogradov(k);
        let ctx = PadicContext::new(p, k, b).unwrap();
        let ws = WeightSeq::gaussian(lo, w.into_iter().map(|(a, b)| GaussInt::new(a, b)).collect()).unwrap();
        prop_assert!(check_u_holder(&ctx, &sys, &ws, s, &cfg()).unwrap());
        let rw = ResidueWeightSeq::new(&ws).unwrap();
        for h in 0..=b {
            let total: BigUint = rw.rho_sq((p as i64).pow(h)).values().sum();
            prop_assert_eq!(&total, rw.rho0_sq());
        }
        for (_, lhs, rhs) in class_refinement_sides(&ctx, &sys, &ws, s.min(2), 0, b.min(2), &cfg()).unwrap() {
            prop_assert!(lhs <= rhs);
        }
    }
}

#[test]
fn monomial_wronskian_closed_form() {
    fn tuples(k: usize, used: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if used.len() == k {
            out.push(used.clone());
            return;
        }
        for d in 1..=8 {
            if !used.contains(&d) {
                used.push(d);
                tuples(k, used, out);
                used.pop();
            }
        }
    }
    for k in 1..=4 {
        let mut all = Vec::new();
        tuples(k, &mut Vec::new(), &mut all);
        for degs in all {
            let sys = PolynomialSystem::monomials(&degs.iter().map(|&d| d as usize).collect::<Vec<_>>()).unwrap();
            let big_d = degs.iter().sum::<i64>() - (k * (k + 1) / 2) as i64;
            let mut c: BigInt = degs.iter().map(|&d| BigInt::from(d)).product();
            for i in 0..k {
                for j in i + 1..k {
                    c *= degs[j] - degs[i];
                }
            }
            assert_eq!(wronskian(&sys), IntPolynomial::monomial(c, big_d as usize), "{degs:?}");
        }
    }
}

#[test]
fn tdi_preserves_solutions() {
    for k in 1..=2 {
        let sys = PolynomialSystem::vinogradov(k);
        for s in 1..=2usize {
            let pts: Vec<i64> = (1..=6).collect();
            let n = pts.len().pow(2 * s as u32);
            for mut idx in 0..n {
                let mut v = Vec::with_capacity(2 * s);
                for _ in 0..2 * s {
                    v.push(pts[idx % 6]);
                    idx /= 6;
                }
                let sol = Solution::from_i64s(&v[..s], &v[s..]);
                if !sol.satisfies(&sys) {
                    continue;
                }
                for q in 1..=3u64 {
                    for xi in -2..=2 {
                        let image = tdi_map(&sys, q, &BigInt::from(xi), &sol).unwrap();
                        assert!(image.satisfies(&sys));
                    }
                }
            }
        }
    }
}

#[test]
fn closed_form_bound_dominates() {
    for d in 2..=100 {
        let r = bound_report(d).unwrap();
        assert!(r.gtilde_bound >= r.s0_floor_plus_one, "d={d}");
        assert!(r.theta == 1 || r.theta == 2);
    }
    assert_eq!(bound_report(10).unwrap().gtilde_bound.to_u64(), Some(97));
}
