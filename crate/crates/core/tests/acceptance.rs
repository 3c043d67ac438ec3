//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::time::{Duration, Instant};

use meanval_core::apps::{
    bound_report, delta_rd, search_tarry, singular_integral, singular_series, theta_d, verify_tarry, TarryWitness,
};
use meanval_core::engine::kernel::Strategy;
use meanval_core::engine::{multidim_brute_force, multidim_from_quadratic, multidim_mean_value, GaussInt, ORACLE_CAP};
use meanval_core::ffield::{ff_brute_force, ff_mean_value, FfSystem, GaloisField};
use meanval_core::padic::{
    check_u_holder, class_refinement_sides, holder_k_sides, interval_congruence_count, lambda_ratio, PadicContext,
};
use meanval_core::{
    brute_force_mean_value, exponent_fit, mean_value, EngineConfig, IntPolynomial, MeanValueResult, PolynomialSystem,
    RationalFunctionSystem, Result, Value, WeightSeq,
};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome {
        pass,
        detail: detail.into(),
    })
}

fn cfg() -> EngineConfig {
    EngineConfig::default()
}

fn count(sys: &PolynomialSystem, x: i64, s: usize) -> Result<MeanValueResult> {
    mean_value(sys, (1, x), s, None, false, &cfg())
}

fn int(v: &Value) -> BigInt {
    v.as_integer().expect("exact count").clone()
}

fn random_spaced(rng: &mut ChaCha8Rng, p: u64, c: u32, k: usize) -> PolynomialSystem {
    let pc = (p as i64).pow(c);
    let polys = (1..=k)
        .map(|j| {
            let mut co: Vec<i64> = (0..=k + 2).map(|_| pc * rng.gen_range(-3..=3)).collect();
            co[j] += 1;
            IntPolynomial::from_i64s(&co)
        })
        .collect();
    PolynomialSystem::new(polys).unwrap()
}

fn c1_oracle_equivalence() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut checked = 0;
    for k in 1..=3usize {
        let mut systems = vec![PolynomialSystem::vinogradov(k)];
        for _ in 0..5 {
            let p = [5u64, 7, 11][rng.gen_range(0..3)];
            let c = rng.gen_range(1..=2);
            systems.push(random_spaced(&mut rng, p, c, k));
        }
        for sys in &systems {
            for s in 1..=3 {
                for x in 1..=6 {
                    let a = count(sys, x, s)?;
                    let b = brute_force_mean_value(sys, (1, x), s, None, false, ORACLE_CAP)?;
                    if a.value != b.value {
                        return outcome(false, format!("mismatch at k={k} s={s} X={x}: {} vs {}", a.value, b.value));
                    }
                    checked += 1;
                }
            }
        }
    }
    outcome(true, format!("{checked} instances agree"))
}

fn c2_closed_forms() -> Result<Outcome> {
    for x in 1..=6i64 {
        let v1 = brute_force_mean_value(&PolynomialSystem::vinogradov(1), (1, x), 1, None, false, ORACLE_CAP)?;
        if int(&v1.value) != BigInt::from(x) {
            return outcome(false, format!("oracle J_1,1({x}) = {}", v1.value));
        }
        for k in 2..=3 {
            let v = brute_force_mean_value(&PolynomialSystem::vinogradov(k), (1, x), 2, None, false, ORACLE_CAP)?;
            if int(&v.value) != BigInt::from(2 * x * x - x) {
                return outcome(false, format!("oracle J_2,{k}({x}) = {}", v.value));
            }
        }
    }
    for x in [10i64, 50, 200] {
        if int(&count(&PolynomialSystem::vinogradov(1), x, 1)?.value) != BigInt::from(x) {
            return outcome(false, format!("J_1,1({x})"));
        }
        for k in 2..=4 {
            let got = int(&count(&PolynomialSystem::vinogradov(k), x, 2)?.value);
            if got != BigInt::from(2 * x * x - x) {
                return outcome(false, format!("J_2,{k}({x}) = {got}"));
            }
        }
    }
    outcome(true, "J_1,1 = X and J_2,k = 2X^2 - X at X in {10, 50, 200}, k in 2..=4")
}

fn c3_critical_k2() -> Result<Outcome> {
    let sys = PolynomialSystem::vinogradov(2);
    let mut vals = Vec::new();
    for x in [64i64, 128, 256, 512] {
        vals.push((x as f64, count(&sys, x, 3)?));
    }
    let fit = exponent_fit(&vals, 3, 2)?;
    let ratios: Vec<f64> = vals.iter().map(|(x, r)| r.value.to_f64() / x.powi(3)).collect();
    let increasing = ratios.windows(2).all(|w| w[1] > w[0]);
    let ok = (3.00..=3.35).contains(&fit.slope) && increasing;
    outcome(ok, format!("slope {:.4}, J/X^3 = {:?}", fit.slope, ratios.iter().map(|r| format!("{r:.4}")).collect::<Vec<_>>()))
}

fn c4_critical_k3() -> Result<Outcome> {
    let sys = PolynomialSystem::vinogradov(3);
    let enumerate = EngineConfig {
        strategy: Strategy::Enumerate,
        ..cfg()
    };
    let mut vals = Vec::new();
    for x in [16i64, 24, 32, 48] {
        vals.push((x as f64, mean_value(&sys, (1, x), 6, None, false, &enumerate)?));
    }
    let fit = exponent_fit(&vals, 6, 3)?;
    outcome((5.7..=6.5).contains(&fit.slope), format!("slope {:.4} (conjectured {})", fit.slope, fit.conjectured))
}

fn c5_missing_slice() -> Result<Outcome> {
    let sys = PolynomialSystem::monomials(&[1, 3])?;
    let mut vals = Vec::new();
    for x in [32i64, 64, 128] {
        vals.push((x as f64, count(&sys, x, 3)?));
    }
    let fit = exponent_fit(&vals, 3, 2)?;
    outcome((2.8..=3.4).contains(&fit.slope), format!("slope {:.4} (conjectured 3)", fit.slope))
}

fn gaussian_weights(rng: &mut ChaCha8Rng, len: usize) -> WeightSeq {
    let lo = rng.gen_range(-20..20);
    let w = (0..len).map(|_| GaussInt::new(rng.gen_range(-3..=3), rng.gen_range(-3..=3))).collect();
    WeightSeq::gaussian(lo, w).unwrap()
}

fn c6_padic_inequalities() -> Result<Outcome> {
    let cfg = cfg();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut total, mut failed) = (0, Vec::new());
    for p in [5u64, 7] {
        for b in 2..=4u32 {
            for k in 1..=3usize {
                for s in [2usize, 4, 6] {
                    let w = gaussian_weights(&mut rng, 10);
                    let ctx = PadicContext::new(p, k, b)?;
                    total += 1;
                    if !check_u_holder(&ctx, &PolynomialSystem::vinogradov(k), &w, s, &cfg)? {
                        failed.push(format!("U p={p} B={b} k={k} s={s}"));
                    }
                }
            }
        }
        for k in 2..=3usize {
            let sys = PolynomialSystem::vinogradov(k);
            let ctx = PadicContext::new(p, k, 2)?;
            for wexp in 1..=2 {
                for (a, b) in [(0, 1), (0, 2), (1, 2)] {
                    let w = gaussian_weights(&mut rng, 14);
                    total += 1;
                    let sides = class_refinement_sides(&ctx, &sys, &w, wexp, a, b, &cfg)?;
                    if sides.iter().any(|(_, l, r)| l > r) {
                        failed.push(format!("refinement p={p} k={k} w={wexp} a={a} b={b}"));
                    }
                }
            }
            let ctx = ctx.with_nu(1)?;
            for r in 1..k {
                for (bp, b) in [(1, 1), (1, 2), (2, 1)] {
                    let w = gaussian_weights(&mut rng, 10);
                    total += 1;
                    let (l, rhs) = holder_k_sides(&ctx, &sys, &w, r, bp, b, &cfg)?;
                    if l > rhs {
                        failed.push(format!("K p={p} k={k} r={r} b'={bp} b={b}"));
                    }
                }
            }
        }
    }
    outcome(failed.is_empty() && total >= 50, format!("{total} combinations, failures: {failed:?}"))
}

fn c7_lambda() -> Result<Outcome> {
    let sys = PolynomialSystem::vinogradov(2);
    let mut ratios = Vec::new();
    for b in 2..=4u32 {
        let ctx = PadicContext::new(5, 2, b)?;
        let w = WeightSeq::indicator(1, 5i64.pow(b))?;
        ratios.push(lambda_ratio(&ctx, &sys, &w, 3, &cfg())?);
    }
    let ok = ratios[2] <= 0.6 && ratios[2] <= ratios[0];
    outcome(ok, format!("ratios at B = 2, 3, 4: {ratios:.4?}"))
}

fn c8_short_intervals() -> Result<Outcome> {
    let ctx = PadicContext::new(5, 2, 4)?;
    let rsys = RationalFunctionSystem::from_polynomials(&PolynomialSystem::vinogradov(2));
    let n8 = interval_congruence_count(&ctx, &rsys, 0, 8, 3, &cfg())?.count.to_f64();
    let n16 = interval_congruence_count(&ctx, &rsys, 0, 16, 3, &cfg())?.count.to_f64();
    let factor = n16 / n8;
    outcome((4.0..=16.0).contains(&factor), format!("N(0,8) = {n8}, N(0,16) = {n16}, factor {factor:.3}"))
}

fn c9_function_field() -> Result<Outcome> {
    let f3 = GaloisField::new(3)?;
    for k in 1..=2 {
        let sys = FfSystem::vinogradov(f3.clone(), k);
        for d in 0..=1 {
            for s in 1..=2 {
                if ff_mean_value(&sys, d, s, &cfg())? != ff_brute_force(&sys, d, s, ORACLE_CAP)? {
                    return outcome(false, format!("mismatch k={k} d={d} s={s}"));
                }
            }
        }
    }
    for q in [3u32, 5] {
        let sys = FfSystem::vinogradov(GaloisField::new(q)?, 2);
        for d in 0..=2u32 {
            let n = (q as u64).pow(d + 1);
            let got = ff_mean_value(&sys, d, 2, &cfg())?;
            if got.to_u64() != Some(2 * n * n - n) {
                return outcome(false, format!("q={q} d={d}: {got} vs 2N^2 - N"));
            }
        }
    }
    outcome(true, "brute force agrees at q = 3; 2N^2 - N holds for q in {3, 5}, d <= 2")
}

fn c10_multidim() -> Result<Outcome> {
    let sys = multidim_from_quadratic(-2, 3)?.primitive_forms();
    for y in 1..=2 {
        let bx = [(1, y), (1, y)];
        for s in 1..=2 {
            let a = int(&multidim_mean_value(&sys, &bx, s, &cfg())?.value);
            let b = multidim_brute_force(&sys, &bx, s, ORACLE_CAP)?;
            if a != b {
                return outcome(false, format!("box [1,{y}]^2 s={s}: {a} vs {b}"));
            }
        }
    }
    let mut got = Vec::new();
    let mut ok = true;
    for y in 2..=4i64 {
        let c = int(&multidim_mean_value(&sys, &[(1, y), (1, y)], 1, &cfg())?.value);
        ok &= c == BigInt::from(y.pow(4));
        got.push(format!("Y={y}: {c} (Y^4 = {})", y.pow(4)));
    }
    outcome(ok, format!("brute force agrees; s=1 counts {}", got.join(", ")))
}

fn c11_tarry() -> Result<Outcome> {
    let w = TarryWitness {
        k: 2,
        columns: vec![vec![1, 5, 6], vec![2, 3, 7]],
    };
    let verified = verify_tarry(&w).valid;
    let search = search_tarry(2, 2, 2, 20, ORACLE_CAP)?;
    outcome(
        verified && search.witness.is_none(),
        format!("witness accepted: {verified}; s=2 exhausted over {} columns", search.columns_examined),
    )
}

fn c12_bounds() -> Result<Outcome> {
    let r = bound_report(10)?;
    let theta = theta_d(10)?;
    let mut hua = vec![10u64];
    hua.extend((2..10).map(|i| 10 - i));
    let delta = delta_rd(9, &hua)?;
    let ok = r.s0_floor_plus_one == 97 && r.gtilde_bound == 97 && theta == 1 && delta == 1;
    outcome(
        ok,
        format!("s_0 = {}, floor+1 = {}, closed form {}, theta = {theta}, Delta = {delta}", r.s0, r.s0_floor_plus_one, r.gtilde_bound),
    )
}

fn c13_singular() -> Result<Outcome> {
    let i = singular_integral(1, 1, 400.0, 1601)?;
    let s = singular_series(2, 4, 40)?;
    let inc: Vec<f64> = [10, 20, 40].iter().map(|&q| s.block_increment(q).unwrap()).collect();
    let ok = (i.estimate - 1.0).abs() <= 1e-3 && inc[0] > inc[1] && inc[1] > inc[2];
    outcome(ok, format!("integral {:.6}, series block increments {inc:.4?}", i.estimate))
}

type Criterion = (u32, &'static str, u64, fn() -> Result<Outcome>);

fn main() {
    let criteria: &[Criterion] = &[
        (1, "oracle equivalence", 60, c1_oracle_equivalence),
        (2, "closed forms", 60, c2_closed_forms),
        (3, "critical exponent k=2", 600, c3_critical_k2),
        (4, "critical exponent k=3", 900, c4_critical_k3),
        (5, "missing-slice system", 300, c5_missing_slice),
        (6, "exact p-adic inequalities", 600, c6_padic_inequalities),
        (7, "lambda probe", 600, c7_lambda),
        (8, "short intervals", 300, c8_short_intervals),
        (9, "function field", 120, c9_function_field),
        (10, "multidimensional system", 120, c10_multidim),
        (11, "Tarry", 60, c11_tarry),
        (12, "bound calculators", 1, c12_bounds),
        (13, "singular integral and series", 120, c13_singular),
    ];
    let filter: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failures = 0;
    for &(id, name, limit, run) in criteria {
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let res = run();
        let took = start.elapsed();
        let (pass, detail) = match res {
            Ok(o) => (o.pass && took <= Duration::from_secs(limit), o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failures += 1;
        }
        println!(
            "{} criterion {id:>2} {name}: {detail} [{:.2}s, limit {limit}s]",
            if pass { "PASS" } else { "FAIL" },
            took.as_secs_f64()
        );
    }
    if failures > 0 {
        println!("{failures} criterion(s) failed");
        std::process::exit(1);
    }
}
