//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Run with `cargo test -p fiarma-core --test acceptance`.

use std::f64::consts::{PI, TAU};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use statrs::function::gamma::{gamma, ln_gamma};

use fiarma_core::existence::{check_conditions, existence_integral, Verdict, DEFAULT_SUPPORT_TOL};
use fiarma_core::hilbert::{operator_power_one_minus_z_expm, Matrix};
use fiarma_core::simulation::{
    averaged_periodogram, simulate_arma, simulate_fiarma, verify_longmemory_decomposition, FiarmaSimulator, SimConfig,
};
use fiarma_core::spectral::{
    arma_spectral_density, autocov_from_density, empirical_autocov, fiarma_spectral_density, fourier_frequencies,
    offset_grid, ArmaModel, FiarmaModel,
};
use fiarma_core::transfer::{
    ar_inverse_laurent, duker_decomposition, envelope_bounds, envelope_middle, frac_ma_coeffs, FracIntegrationSpec,
    OperatorPolynomial,
};
use fiarma_core::{Execution, HilbertGrid, LinearOperator, C64};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_unitary(n: usize, r: &mut ChaCha8Rng) -> LinearOperator {
    let g = DMatrix::from_fn(n, n, |_, _| C64::new(r.sample(StandardNormal), r.sample(StandardNormal)));
    LinearOperator::new(g.qr().q()).unwrap()
}

fn random_orthogonal(n: usize, r: &mut ChaCha8Rng) -> LinearOperator {
    let g = DMatrix::from_fn(n, n, |_, _| re(r.sample(StandardNormal)));
    let q = g.map(|z| z.re).qr().q();
    LinearOperator::new(q.map(re)).unwrap()
}

/// `U^H diag(d) U`.
fn conjugated(u: &LinearOperator, d: &[C64]) -> LinearOperator {
    &(&u.adjoint() * &LinearOperator::diagonal(d)) * u
}

/// `Γ(k + d) / (Γ(d) k!)` from the gamma function itself.
fn gamma_ratio(k: usize, d: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    if d == 0.0 {
        return 0.0;
    }
    let kf = k as f64;
    if k <= 150 {
        return gamma(kf + d) / (gamma(d) * gamma(kf + 1.0));
    }
    let g = gamma(d);
    g.signum() * (ln_gamma(kf + d) - ln_gamma(kf + 1.0) - g.abs().ln()).exp()
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

// 1
fn scalar_arfima_reduction() -> Outcome {
    let mut worst: f64 = 0.0;
    for d in [-0.4, 0.3, 0.45] {
        let c = frac_ma_coeffs(&FracIntegrationSpec::scalar(1, d), 1000);
        for k in 0..=1000 {
            let want = gamma_ratio(k, d);
            let got = c.ops[k].get(0, 0);
            worst = worst.max((got - re(want)).norm() / want.abs());
        }
    }
    outcome(worst < 1e-10, format!("max relative error {worst:.2e} (tol 1e-10)"))
}

// 2
fn envelope_bounds_hold() -> Outcome {
    let mut r = rng(2);
    let mut violations = 0;
    let mut lib_mismatch: f64 = 0.0;
    for _ in 0..10_000 {
        let z = C64::new(r.random_range(-3.0..3.0), r.random_range(-3.0..3.0));
        let mut lambda: f64 = r.random_range(-PI..PI);
        if lambda == 0.0 {
            lambda = 1e-3;
        }
        // |w^z|² = exp(2 (Re z ln|w| − Im z arg w)) with the principal argument
        let w = C64::new(1.0 - lambda.cos(), lambda.sin());
        let middle = (2.0 * (z.re * w.norm().ln() - z.im * w.arg())).exp();
        lib_mismatch = lib_mismatch.max((envelope_middle(z, lambda) - middle).abs() / middle);
        let (lo, hi) = envelope_bounds(z, lambda).unwrap();
        if lo > middle * (1.0 + 1e-12) || middle > hi * (1.0 + 1e-12) {
            violations += 1;
        }
    }
    outcome(
        violations == 0 && lib_mismatch < 1e-12,
        format!("{violations} violations in 10000 samples, library middle off by {lib_mismatch:.1e}"),
    )
}

// 3
fn ar_inversion() -> Outcome {
    let mut worst_rec: f64 = 0.0;
    let mut r = rng(3);
    // causal 3x3 AR(2) and a 2x2 AR(1) with one root inside the unit disk
    let a1 = LinearOperator::from_fn(3, |_, _| re(0.25 * r.sample::<f64, _>(StandardNormal))).unwrap();
    let a2 = LinearOperator::from_fn(3, |_, _| re(0.15 * r.sample::<f64, _>(StandardNormal))).unwrap();
    let mixed = LinearOperator::diagonal(&[re(0.5), re(2.0)]);
    let cases = [
        OperatorPolynomial::new(3, vec![a1, a2]).unwrap(),
        OperatorPolynomial::new(2, vec![&random_unitary(2, &mut r).adjoint() * &(&mixed * &random_unitary(2, &mut rng(30)))]).unwrap(),
    ];
    for phi in &cases {
        let k = 200;
        let inv = ar_inverse_laurent(phi, k, 4096).unwrap();
        let p = |j: i64| inv.coeffs.get(j).unwrap().clone();
        for kk in (-(k as i64) + phi.degree() as i64)..=(k as i64) {
            if kk == 0 {
                continue;
            }
            let mut rhs = LinearOperator::zeros(phi.dim());
            for (j, a) in phi.coeffs().iter().enumerate() {
                rhs += &(a * &p(kk - 1 - j as i64));
            }
            worst_rec = worst_rec.max(p(kk).dist(&rhs));
        }
    }
    let inv = ar_inverse_laurent(&OperatorPolynomial::scalar_lag1(1, 0.5), 50, 4096).unwrap();
    let worst_geo = (0..=50)
        .map(|k| (inv.coeffs.get(k).unwrap().get(0, 0) - re(0.5f64.powi(k as i32))).norm())
        .fold(0.0, f64::max);
    outcome(
        worst_rec < 1e-8 && worst_geo < 1e-9,
        format!("recursion residual {worst_rec:.2e} (tol 1e-8), scalar 0.5^k error {worst_geo:.2e} (tol 1e-9)"),
    )
}

// 4
fn filtering_rule() -> Outcome {
    let n = 8;
    let mut r = rng(4);
    let u = random_unitary(n, &mut r);
    let d: Vec<C64> = (0..n).map(|_| C64::new(r.random_range(-0.4..0.45), r.random_range(-0.3..0.3))).collect();
    let d_op = conjugated(&u, &d);
    let a = LinearOperator::from_fn(n, |_, _| C64::new(0.1 * r.sample::<f64, _>(StandardNormal), 0.1 * r.sample::<f64, _>(StandardNormal))).unwrap();
    let b = LinearOperator::from_fn(n, |_, _| re(0.2 * r.sample::<f64, _>(StandardNormal))).unwrap();
    let l = LinearOperator::from_fn(n, |_, _| C64::new(r.sample(StandardNormal), r.sample(StandardNormal))).unwrap();
    let sigma = (&l * &l.adjoint()).hermitian_part();
    let base = ArmaModel::new(
        OperatorPolynomial::new(n, vec![a.clone()]).unwrap(),
        OperatorPolynomial::new(n, vec![b.clone()]).unwrap(),
        sigma.clone(),
    )
    .unwrap();
    let m = FiarmaModel::new(base, FracIntegrationSpec::normal(d_op.clone(), 1e-10).unwrap()).unwrap();
    let freqs = offset_grid(4096);
    let got = fiarma_spectral_density(&m, &freqs).unwrap();

    let id: Matrix = DMatrix::identity(n, n);
    let minus_d = d_op.scale_re(-1.0);
    let mut worst: f64 = 0.0;
    for (lambda, g) in freqs.iter().zip(&got.values) {
        let z = C64::from_polar(1.0, -lambda);
        let phi = &id - a.matrix() * z;
        let theta = &id + b.matrix() * z;
        let t = phi.lu().solve(&theta).unwrap();
        let gx = &t * sigma.matrix() * t.adjoint() / re(TAU);
        let f = operator_power_one_minus_z_expm(&minus_d, z).unwrap();
        let want = f.matrix() * gx * f.matrix().adjoint();
        let want = LinearOperator::new(want).unwrap();
        worst = worst.max(g.dist(&want) / want.op_norm());
    }
    outcome(worst < 1e-12, format!("max relative deviation {worst:.2e} over 4096 frequencies, 8x8 (tol 1e-12)"))
}

// 5
fn bochner_round_trip() -> Outcome {
    let t = 100_000;
    let tol_unit = 5.0 / (t as f64).sqrt();
    let sigma = LinearOperator::from_real_rows(&[&[2.0, 0.5, 0.0], &[0.5, 1.0, 0.3], &[0.0, 0.3, 0.5]]).unwrap();
    let cases = [
        ("white noise 3x3", ArmaModel::white_noise(sigma).unwrap()),
        (
            "AR(1) a=0.5",
            ArmaModel::new(
                OperatorPolynomial::scalar_lag1(1, 0.5),
                OperatorPolynomial::identity(1),
                LinearOperator::identity(1),
            )
            .unwrap(),
        ),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, m) in &cases {
        let g = arma_spectral_density(m, &offset_grid(4096)).unwrap();
        let path = simulate_arma(m, &SimConfig::new(t, 5)).unwrap();
        let tol = tol_unit * m.sigma().op_norm();
        let mut worst: f64 = 0.0;
        for h in 0..=2 {
            let err = autocov_from_density(&g, h).dist(&empirical_autocov(&path, h).unwrap());
            worst = worst.max(err);
        }
        pass &= worst <= tol;
        parts.push(format!("{name}: {worst:.2e} (tol {tol:.2e})"));
    }
    outcome(pass, format!("max_h |Gamma_hat(h) - Gamma(h)|: {}", parts.join(", ")))
}

fn battery() -> Vec<(String, ArmaModel, f64)> {
    let white = ArmaModel::white_noise(LinearOperator::identity(1)).unwrap();
    let ar = ArmaModel::new(
        OperatorPolynomial::scalar_lag1(1, 0.5),
        OperatorPolynomial::identity(1),
        LinearOperator::identity(1),
    )
    .unwrap();
    let mut out = Vec::new();
    for d in [-0.4, 0.0, 0.3, 0.49, 0.5, 0.6, 0.9] {
        out.push((format!("white d={d}"), white.clone(), d));
        out.push((format!("AR(1) d={d}"), ar.clone(), d));
    }
    out
}

// 6
fn existence_consistency() -> Outcome {
    let grid = HilbertGrid::scalar();
    let mut disagreements = Vec::new();
    let mut holds = 0;
    let cases = battery();
    for (name, m, d) in &cases {
        let spec = FracIntegrationSpec::scalar(1, *d);
        let report = check_conditions(m, &spec, &grid, DEFAULT_SUPPORT_TOL).unwrap();
        assert!(report.sigma_w[0] > 0.0);
        let integral = existence_integral(m, &spec, 1.0, 16, 40).unwrap();
        let verdict_holds = report.verdict == Verdict::Holds;
        holds += usize::from(verdict_holds);
        let theory = *d < 0.5;
        if verdict_holds != !integral.divergent || verdict_holds != theory {
            disagreements.push(name.clone());
        }
    }
    outcome(
        disagreements.is_empty(),
        format!(
            "{} cases, {holds} hold, disagreements: [{}]",
            cases.len(),
            disagreements.join(", ")
        ),
    )
}

// 7
fn eta_independence() -> Outcome {
    let mut mismatched = Vec::new();
    let cases = battery();
    for (name, m, d) in &cases {
        let spec = FracIntegrationSpec::scalar(1, *d);
        let flags: Vec<bool> = [0.1, 1.0, 3.0]
            .iter()
            .map(|&eta| existence_integral(m, &spec, eta, 16, 40).unwrap().divergent)
            .collect();
        if flags.iter().any(|f| *f != flags[0]) {
            mismatched.push(name.clone());
        }
    }
    outcome(
        mismatched.is_empty(),
        format!("{} cases x eta in {{0.1, 1, 3}}, mismatches: [{}]", cases.len(), mismatched.join(", ")),
    )
}

fn duker_cases() -> Vec<(&'static str, LinearOperator, Vec<f64>, LinearOperator)> {
    let u = random_unitary(2, &mut rng(8));
    vec![
        ("N=0.7", LinearOperator::scalar(1, re(0.7)), vec![0.7], LinearOperator::identity(1)),
        ("N=U^H diag(0.6,0.8) U", conjugated(&u, &[re(0.6), re(0.8)]), vec![0.6, 0.8], u),
    ]
}

// 8
fn duker_decomposition_rates() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, n, eig, u) in duker_cases() {
        let dec = duker_decomposition(&n, 10_000).unwrap();
        let rho = eig.iter().copied().fold(f64::INFINITY, f64::min);
        let norms = dec.delta_norms();
        let ks: Vec<usize> = (0..=60)
            .map(|i| (100.0 * 100f64.powf(i as f64 / 60.0)).round() as usize)
            .collect();
        let xs: Vec<f64> = ks.iter().map(|&k| (k as f64).ln()).collect();
        let ys: Vec<f64> = ks.iter().map(|&k| norms[k].ln()).collect();
        let s = slope(&xs, &ys);

        // b_k and C rebuilt from scalar gamma values in the eigenbasis
        let c_ref = conjugated(&u, &eig.iter().map(|&x| re(1.0 / gamma(1.0 - x))).collect::<Vec<_>>());
        let mut recon: f64 = 0.0;
        for k in 0..=500 {
            let b = conjugated(&u, &eig.iter().map(|&x| re(gamma_ratio(k, 1.0 - x))).collect::<Vec<_>>());
            let w = conjugated(&u, &eig.iter().map(|&x| re(((k + 1) as f64).powf(-x))).collect::<Vec<_>>());
            let rebuilt = &(&c_ref * &w) + dec.deltas.get(k as i64).unwrap();
            recon = recon.max(b.dist(&rebuilt));
        }
        let ok = s <= -(1.0 + rho) + 0.1 && recon < 1e-8;
        pass &= ok;
        parts.push(format!(
            "{name}: slope {s:.3} (need <= {:.2}), reconstruction {recon:.1e}",
            -(1.0 + rho) + 0.1
        ));
    }
    outcome(pass, parts.join("; "))
}

// 9
fn longmemory_equivalence() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, n, _, _) in duker_cases() {
        let dim = n.dim();
        let grid = HilbertGrid::uniform(dim).unwrap();
        let cfg = SimConfig::new(2000, 9).with_k_trunc(500);
        let r = verify_longmemory_decomposition(&n, &LinearOperator::identity(dim), &grid, &cfg, 10_000).unwrap();
        let ok = r.residual < 1e-8 && r.cauchy_block_relative < 1e-3;
        pass &= ok;
        parts.push(format!(
            "{name}: residual {:.1e}, (S_K - S_K/2)/S_K {:.2e}, extrapolated remainder/S_K {:.2e}",
            r.residual, r.cauchy_block_relative, r.extrapolated_remainder_relative
        ));
    }
    outcome(pass, parts.join("; "))
}

// 10
fn spectral_monte_carlo() -> Outcome {
    let t = 4096;
    let reps = 200;
    let band: Vec<f64> = fourier_frequencies(t).into_iter().filter(|&l| l >= 0.1).collect();
    let exec = Execution::default();

    let white = ArmaModel::white_noise(LinearOperator::identity(1)).unwrap();
    let scalar = FiarmaModel::new(white, FracIntegrationSpec::scalar(1, 0.3)).unwrap();
    let cfg = SimConfig::new(t, 10);
    let sim = FiarmaSimulator::new(&scalar, &HilbertGrid::scalar(), &cfg, false).unwrap();
    let avg = averaged_periodogram(reps, &band, exec, |r| sim.path(r)).unwrap();
    let target: Vec<f64> = band.iter().map(|l| (2.0 * (l / 2.0).sin()).powf(-0.6) / TAU).collect();
    let est: Vec<f64> = avg.values.iter().map(|v| v.get(0, 0).re).collect();
    let l1 = est.iter().zip(&target).map(|(e, f)| (e - f).abs()).sum::<f64>() / target.iter().sum::<f64>();
    let pointwise: Vec<f64> = est.iter().zip(&target).map(|(e, f)| (e - f).abs() / f).collect();
    let max_pt = pointwise.iter().copied().fold(0.0, f64::max);
    let within = pointwise.iter().filter(|&&x| x <= 0.15).count();

    let n = 4;
    let mut r = rng(10);
    let q = random_orthogonal(n, &mut r);
    let d_op = conjugated(&q, &[re(0.1), re(0.2), re(0.3), re(0.4)]);
    let a = conjugated(&random_orthogonal(n, &mut r), &[re(0.5), re(-0.3), re(0.2), re(0.0)]);
    let sigma = LinearOperator::from_real_rows(&[
        &[1.0, 0.3, 0.0, 0.1],
        &[0.3, 1.0, 0.2, 0.0],
        &[0.0, 0.2, 0.8, 0.1],
        &[0.1, 0.0, 0.1, 0.6],
    ])
    .unwrap();
    let base = ArmaModel::new(OperatorPolynomial::new(n, vec![a]).unwrap(), OperatorPolynomial::identity(n), sigma).unwrap();
    let model = FiarmaModel::new(base, FracIntegrationSpec::normal(d_op, 1e-10).unwrap()).unwrap();
    let sim = FiarmaSimulator::new(&model, &HilbertGrid::uniform(n).unwrap(), &cfg, false).unwrap();
    let avg = averaged_periodogram(reps, &band, exec, |r| sim.path(r)).unwrap();
    let dens = fiarma_spectral_density(&model, &band).unwrap();
    let num: f64 = avg.values.iter().zip(&dens.values).map(|(e, g)| (e - g).hs_norm()).sum();
    let den: f64 = dens.traces().iter().sum();
    let trace_rel = num / den;

    outcome(
        l1 < 0.15 && trace_rel < 0.15,
        format!(
            "{} frequencies in [0.1, pi]; scalar d=0.3: relative L1 error {l1:.3} (pointwise max {max_pt:.3}, {within} of {} within 0.15); 4x4: sum ||I - g||_F / sum tr g = {trace_rel:.3}; tol 0.15",
            band.len(),
            band.len()
        ),
    )
}

// 11
fn refusal_behavior() -> Outcome {
    let grid = HilbertGrid::scalar();
    let cfg = SimConfig::new(256, 11).with_k_trunc(256);
    let white = ArmaModel::white_noise(LinearOperator::identity(1)).unwrap();
    let m = FiarmaModel::new(white, FracIntegrationSpec::scalar(1, 0.6)).unwrap();
    let refused = match simulate_fiarma(&m, &grid, &cfg, false) {
        Err(e) => e.is_refusal() && e.to_string().contains("(ii)"),
        Ok(_) => false,
    };
    let differencing = ArmaModel::new(
        OperatorPolynomial::identity(1),
        OperatorPolynomial::scalar_lag1(1, -1.0),
        LinearOperator::identity(1),
    )
    .unwrap();
    let m = FiarmaModel::new(differencing, FracIntegrationSpec::scalar(1, 0.75)).unwrap();
    let proceeds = simulate_fiarma(&m, &grid, &cfg, false).is_ok();
    outcome(
        refused && proceeds,
        format!("d=0.6 white noise refused citing (ii): {refused}; theta(1)=0 with d=0.75 proceeds: {proceeds}"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, Duration, fn() -> Outcome); 11] = [
        ("scalar ARFIMA reduction", Duration::from_secs(1), scalar_arfima_reduction),
        ("envelope bounds", Duration::from_secs(1), envelope_bounds_hold),
        ("AR inversion", Duration::from_secs(1), ar_inversion),
        ("filtering rule", Duration::from_secs(10), filtering_rule),
        ("Bochner round trip", Duration::from_secs(30), bochner_round_trip),
        ("existence theorem consistency", Duration::from_secs(60), existence_consistency),
        ("eta independence", Duration::from_secs(60), eta_independence),
        ("power-law decomposition", Duration::from_secs(30), duker_decomposition_rates),
        ("long-memory equivalence", Duration::from_secs(30), longmemory_equivalence),
        ("spectral Monte Carlo", Duration::from_secs(300), spectral_monte_carlo),
        ("refusal behavior", Duration::from_secs(1), refusal_behavior),
    ];
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let elapsed = start.elapsed();
        let pass = o.pass && elapsed <= *budget;
        failed += usize::from(!pass);
        println!(
            "[{}] {:>2} {name}: {} ({:.2} s, budget {} s)",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
