//! One function per command. Each fills a [`Campaign`] and returns the
//! resolved parameters for the job echo.

use awcore::asep::{self, ASEPRates, Boundary};
use awcore::awalgebra::{
    aw_residual, build_basic_representation, build_coideal_ops, fit_structure_constants, l_v0_from_omega,
    coideal_structure_constants, AWStructure, TridiagonalPair,
};
use awcore::lattice::{
    dual_reflection_residual_variant, reflection_residual_variant, rll_residual, ybe_residual, KVariant,
};
use awcore::linalg::{c, cr};
use awcore::oracle::{
    build_generator, build_xxz, gauge_residual, oracle_observables, spectrum_compare, spectrum_distance,
    stationary_distribution, total_variation, XxzVariant, MAX_SITES,
};
use awcore::qspecial::{
    apply_d, aw_norm, aw_poly_eval, aw_poly_laurent, dual_eigenvalue, orthogonality_check, recurrence_coeffs,
    AWParams, QParams,
};
use awcore::quantumrep::{
    build_evaluation_rep, build_spin_rep, casimir_value, coproduct_coideal_residual, CoidealParams,
};
use awcore::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::config::*;
use crate::report::{cj, fmt_f64, Campaign};
use crate::CliError;

pub struct Outputs {
    pub echo: Value,
    pub campaign: Campaign,
    pub variant: Option<String>,
    pub table: Option<(Option<String>, Vec<u8>)>,
}

type Res = Result<Outputs, CliError>;

fn load<P>(job: &JobConfig, tol: Option<f64>) -> Result<P, CliError>
where
    P: serde::de::DeserializeOwned + Tolerance,
{
    let mut p: P = job.params()?;
    if let Some(t) = tol {
        p.set_tol(t);
    }
    Ok(p)
}

fn echo<P: serde::Serialize>(p: &P) -> Value {
    serde_json::to_value(p).expect("parameters serialize")
}

fn outputs(echo: Value, campaign: Campaign) -> Outputs {
    Outputs { echo, campaign, variant: None, table: None }
}

fn random_z(rng: &mut ChaCha8Rng) -> C64 {
    C64::from_polar(rng.random_range(0.5..2.0), rng.random_range(-1.0..1.0))
}

fn random_cp(rng: &mut ChaCha8Rng) -> CoidealParams {
    let mut z = || c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    CoidealParams::new(z(), z(), z(), z(), z(), z())
}

fn random_nu(rng: &mut ChaCha8Rng) -> C64 {
    c(rng.random_range(0.5..1.5), rng.random_range(-0.5..0.5))
}

fn cp_json(cp: &CoidealParams) -> Value {
    json!({ "u": cj(cp.u), "u_star": cj(cp.u_star), "v": cj(cp.v), "v_star": cj(cp.v_star), "k": cj(cp.k), "k_star": cj(cp.k_star) })
}

fn structure_json(s: &AWStructure) -> Value {
    json!({ "rho": cj(s.rho), "rho_star": cj(s.rho_star), "omega": cj(s.omega), "eta": cj(s.eta), "eta_star": cj(s.eta_star) })
}

fn rel(x: C64, want: C64) -> f64 {
    (x - want).norm() / want.norm().max(1.0)
}

/// Rate set `i` of a seeded campaign. Even sets draw `α ∈ [0.05, 0.3)` and
/// `β ∈ [0.6, 1.8)`, odd sets the reverse; `γ, δ ∈ [0, 0.5)`, `q ∈ [0.2, 0.8)`.
/// Small entry rates give `a, b > 1` and large ones `a, b < 1`.
pub fn random_rates(rng: &mut ChaCha8Rng, i: usize) -> RatesCfg {
    let q = rng.random_range(0.2..0.8);
    let (lo, hi) = ((0.05, 0.3), (0.6, 1.8));
    let (ra, rb) = if i % 2 == 0 { (lo, hi) } else { (hi, lo) };
    RatesCfg {
        alpha: rng.random_range(ra.0..ra.1),
        beta: rng.random_range(rb.0..rb.1),
        gamma: rng.random_range(0.0..0.5),
        delta: rng.random_range(0.0..0.5),
        q,
    }
}

/// Explicit sets if any are given, otherwise `count` seeded ones.
fn rate_sets(explicit: &[RatesCfg], count: usize, seed: u64) -> Result<Vec<(RatesCfg, ASEPRates)>, CliError> {
    let cfgs: Vec<RatesCfg> = if explicit.is_empty() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(1);
        (0..count).map(|i| random_rates(&mut rng, i)).collect()
    } else {
        explicit.to_vec()
    };
    cfgs.into_iter()
        .map(|r| {
            let rates = ASEPRates::new(r.alpha, r.beta, r.gamma, r.delta, r.q)
                .map_err(|e| CliError::Config(format!("rate set {r:?}: {e}")))?;
            Ok((r, rates))
        })
        .collect()
}

fn rates_json(r: &RatesCfg) -> Value {
    json!({ "alpha": r.alpha, "beta": r.beta, "gamma": r.gamma, "delta": r.delta, "q": r.q })
}

fn kappa_info(camp: &mut Campaign, r: &RatesCfg, rates: &ASEPRates) {
    match asep::kappa_map(rates) {
        Ok(p) => camp.info(
            "kappa",
            rates_json(r),
            json!({ "a": cj(p.a), "b": cj(p.b), "c": cj(p.c), "d": cj(p.d) }),
        ),
        Err(e) => camp.info("kappa", rates_json(r), json!({ "error": e.to_string() })),
    }
}

fn poly_params(p: &PolyCfg) -> Result<AWParams, CliError> {
    AWParams::real(p.a, p.b, p.c, p.d, p.q).map_err(|e| CliError::Config(format!("{p:?}: {e}")))
}

fn qparams(q: f64) -> Result<QParams, CliError> {
    QParams::new(q).map_err(|e| CliError::Config(e.to_string()))
}

fn parse_k_variant(name: &str) -> Result<KVariant, CliError> {
    KVariant::ALL
        .into_iter()
        .find(|v| v.name() == name)
        .ok_or_else(|| CliError::Config(format!("unknown K-matrix variant {name}")))
}

fn parse_xxz_variant(name: &str) -> Result<XxzVariant, CliError> {
    match name {
        "ratio" => Ok(XxzVariant::Ratio),
        "nominal" => Ok(XxzVariant::Nominal),
        _ => Err(CliError::Config(format!("unknown XXZ variant {name}"))),
    }
}

pub fn verify_ybe(job: &JobConfig, _seed: u64, tol: Option<f64>) -> Res {
    let p: YbeParams = load(job, tol)?;
    if p.grid < 2 || !(p.z_min > 0.0 && p.z_max > p.z_min) {
        return Err(CliError::Config("grid needs at least two points and 0 < z_min < z_max".into()));
    }
    let (lo, hi) = (p.z_min.log10(), p.z_max.log10());
    let grid: Vec<f64> = (0..p.grid).map(|i| 10f64.powf(lo + (hi - lo) * i as f64 / (p.grid - 1) as f64)).collect();
    let mut camp = Campaign::default();
    for &qv in &p.q {
        let q = qparams(qv)?;
        for &z1 in &grid {
            for &z2 in &grid {
                let inputs = json!({ "q": qv, "z1": z1, "z2": z2 });
                match ybe_residual(cr(z1), cr(z2), q) {
                    Ok(r) => camp.below("ybe", inputs, r, p.tol),
                    Err(e) => camp.error("ybe", inputs, &e),
                }
            }
        }
    }
    Ok(outputs(echo(&p), camp))
}

pub fn verify_rll(job: &JobConfig, seed: u64, tol: Option<f64>) -> Res {
    let p: RllParams = load(job, tol)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut camp = Campaign::default();
    for &qv in &p.q {
        let q = qparams(qv)?;
        for &jt in &p.spins_twice {
            let rep = build_spin_rep(jt, q);
            for _ in 0..p.samples {
                let (z1, z2) = (random_z(&mut rng), random_z(&mut rng));
                let inputs = json!({ "q": qv, "spin_twice": jt, "z1": cj(z1), "z2": cj(z2) });
                match rll_residual(z1, z2, &rep) {
                    Ok(r) => camp.below("rll", inputs, r, p.tol),
                    Err(e) => camp.error("rll", inputs, &e),
                }
            }
        }
    }
    Ok(outputs(echo(&p), camp))
}

/// Exact coideal pair on a spin evaluation representation with its closed-form constants.
fn coideal_case(dim: usize, q: QParams, nu: C64, cp: &CoidealParams) -> Result<(TridiagonalPair, AWStructure), CliError> {
    if dim < 2 {
        return Err(CliError::Config("representation dimensions start at 2".into()));
    }
    let base = build_spin_rep(dim - 1, q);
    let pair = build_coideal_ops(&build_evaluation_rep(nu, &base), cp);
    let l = casimir_value(&base)? * (q.s() * q.s());
    Ok((pair, coideal_structure_constants(&cp.absorb_nu(nu), l, q)))
}

pub fn verify_aw(job: &JobConfig, seed: u64, tol: Option<f64>) -> Res {
    let p: AwParams = load(job, tol)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut camp = Campaign::default();

    for &qv in &p.q {
        let q = qparams(qv)?;
        for &dim in &p.dims {
            for _ in 0..p.samples {
                let cp = random_cp(&mut rng);
                let nu = random_nu(&mut rng);
                let (pair, s) = coideal_case(dim, q, nu, &cp)?;
                let inputs = json!({ "q": qv, "dim": dim, "nu": cj(nu), "coideal": cp_json(&cp) });
                match aw_residual(&pair, &s) {
                    Ok((r1, r2)) => camp.below("aw_coideal", inputs.clone(), r1.max(r2), p.tol),
                    Err(e) => camp.error("aw_coideal", inputs.clone(), &e),
                }
                match fit_structure_constants(&pair) {
                    Ok((fit, _)) => {
                        camp.below("fitted_rho", inputs.clone(), rel(fit.rho, s.rho), p.rho_tol);
                        camp.below("fitted_rho_star", inputs.clone(), rel(fit.rho_star, s.rho_star), p.rho_tol);
                        let l = l_v0_from_omega(&cp.absorb_nu(nu), fit.omega, q);
                        camp.info(
                            "casimir_from_fit",
                            inputs,
                            match l {
                                Ok(l) => json!({ "l": cj(l), "omega_fit": cj(fit.omega) }),
                                Err(e) => json!({ "error": e.to_string() }),
                            },
                        );
                    }
                    Err(e) => camp.error("fitted_rho", inputs, &e),
                }
            }
        }
    }

    let q = qparams(p.q.first().copied().unwrap_or(0.5))?;
    for [d1, d2] in &p.coproduct_dims {
        for _ in 0..p.coproduct_samples {
            let cp = random_cp(&mut rng);
            let (nu1, nu2) = (random_nu(&mut rng), random_nu(&mut rng));
            if *d1 < 2 || *d2 < 2 {
                return Err(CliError::Config("coproduct dimensions start at 2".into()));
            }
            let r1 = build_evaluation_rep(nu1, &build_spin_rep(d1 - 1, q));
            let r2 = build_evaluation_rep(nu2, &build_spin_rep(d2 - 1, q));
            let inputs = json!({ "q": q.q, "dims": [d1, d2], "nu": [cj(nu1), cj(nu2)], "coideal": cp_json(&cp) });
            match coproduct_coideal_residual(&r1, &r2, &cp) {
                Ok(r) => camp.below("coproduct_coideal", inputs, r, p.coproduct_tol),
                Err(e) => camp.error("coproduct_coideal", inputs, &e),
            }
        }
    }

    let bp = poly_params(&p.basic)?;
    let inputs = json!({ "params": p.basic, "n": p.basic_n });
    match build_basic_representation(p.basic_n, &bp).and_then(|pair| fit_structure_constants(&pair).map(|f| (pair, f))) {
        Ok((pair, (fit, res))) => {
            camp.below("basic_fit_residual", inputs.clone(), res, p.basic_tol);
            let qq = bp.q.q - 1.0 / bp.q.q;
            let rho = cr(-qq * qq);
            let rho_star = -bp.abcd() / bp.q.q * (qq * qq);
            camp.below("basic_rho", inputs.clone(), rel(fit.rho, rho), p.rho_tol);
            camp.below("basic_rho_star", inputs.clone(), rel(fit.rho_star, rho_star), p.rho_tol);
            if let Ok((r1, r2)) = aw_residual(&pair, &fit) {
                camp.below("basic_aw", inputs.clone(), r1.max(r2), p.basic_tol);
            }
            camp.info("basic_fitted_constants", inputs, structure_json(&fit));
        }
        Err(e) => camp.error("basic_fit_residual", inputs, &e),
    }

    for pc in &p.poly_sets {
        let ap = poly_params(pc)?;
        for n in 0..=p.d_max_degree {
            let inputs = json!({ "params": pc, "n": n });
            let lam = dual_eigenvalue(n, &ap);
            let r = aw_poly_laurent(n, &ap)
                .and_then(|pn| apply_d(&pn, &ap).map(|dp| dp.sub(&pn.scale(lam)).norm() / (pn.norm() * lam.norm())));
            match r {
                Ok(r) => camp.below("d_eigenvalue", inputs, r, p.d_tol),
                Err(e) => camp.error("d_eigenvalue", inputs, &e),
            }
        }
        for n in 0..=p.recurrence_max_degree {
            for &x in &p.recurrence_x {
                let inputs = json!({ "params": pc, "n": n, "x": x });
                let r = (|| -> awcore::Result<f64> {
                    let (an, bn, cn) = recurrence_coeffs(n, &ap)?;
                    let pn = aw_poly_eval(n, cr(x), &ap)?;
                    let pn1 = aw_poly_eval(n + 1, cr(x), &ap)?;
                    let pm1 = if n > 0 { aw_poly_eval(n - 1, cr(x), &ap)? } else { cr(0.0) };
                    let (t1, t2, t3) = (bn * pn1, an * pn, cn * pm1);
                    let scale = (pn * x).norm() + t1.norm() + t2.norm() + t3.norm();
                    Ok((t1 + t2 + t3 - pn * x).norm() / scale.max(1e-300))
                })();
                match r {
                    Ok(r) => camp.below("recurrence", inputs, r, p.recurrence_tol),
                    Err(e) => camp.error("recurrence", inputs, &e),
                }
            }
        }
        if ap.params().iter().all(|z| z.norm() < 1.0) {
            let hs: Vec<C64> = (0..=p.orthogonality_max_degree).map(|n| aw_norm(n, &ap)).collect();
            for m in 0..=p.orthogonality_max_degree {
                for n in 0..=p.orthogonality_max_degree {
                    let inputs = json!({ "params": pc, "m": m, "n": n, "quad_points": p.quad_points });
                    match orthogonality_check(m, n, &ap, p.quad_points) {
                        Ok(o) => {
                            let want = if m == n { o.h_n_ref } else { cr(0.0) };
                            let scale = (hs[m].norm() * hs[n].norm()).sqrt().max(1e-300);
                            camp.below("orthogonality", inputs, (o.integral - want).norm() / scale, p.orthogonality_tol);
                        }
                        Err(e) => camp.error("orthogonality", inputs, &e),
                    }
                }
            }
        }
    }
    Ok(outputs(echo(&p), camp))
}

fn re_campaign(job: &JobConfig, seed: u64, tol: Option<f64>, dual: bool) -> Res {
    let p: ReParams = load(job, tol)?;
    let variant = parse_k_variant(&p.variant)?;
    let residual = |z1: C64, z2: C64, pair: &TridiagonalPair, s: &AWStructure, v: KVariant| {
        if dual {
            dual_reflection_residual_variant(z1, z2, pair, s, v)
        } else {
            reflection_residual_variant(z1, z2, pair, s, v)
        }
    };
    let name = if dual { "dual_re" } else { "re" };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut camp = Campaign::default();
    let run = |camp: &mut Campaign, label: &str, inputs: Value, pair: &TridiagonalPair, s: &AWStructure, gate: f64, rng: &mut ChaCha8Rng| {
        let (z1, z2) = (random_z(rng), random_z(rng));
        let mut inputs = inputs;
        inputs["z1"] = cj(z1);
        inputs["z2"] = cj(z2);
        match residual(z1, z2, pair, s, variant) {
            Ok(r) => camp.below(&format!("{name}_{label}"), inputs.clone(), r, gate),
            Err(e) => camp.error(&format!("{name}_{label}"), inputs.clone(), &e),
        }
        let bad = AWStructure { omega: s.omega * p.control_omega_factor, ..*s };
        match residual(z1, z2, pair, &bad, variant) {
            Ok(r) => camp.above(&format!("{name}_{label}_control_omega"), inputs.clone(), r, p.control_floor),
            Err(e) => camp.error(&format!("{name}_{label}_control_omega"), inputs.clone(), &e),
        }
        let all: Vec<Value> = KVariant::ALL
            .iter()
            .map(|v| match residual(z1, z2, pair, s, *v) {
                Ok(r) => json!({ "variant": v.name(), "residual": r }),
                Err(e) => json!({ "variant": v.name(), "error": e.to_string() }),
            })
            .collect();
        camp.info(&format!("{name}_{label}_variants"), inputs, Value::Array(all));
    };
    for &qv in &p.q {
        let q = qparams(qv)?;
        for &dim in &p.dims {
            for _ in 0..p.samples {
                let cp = random_cp(&mut rng);
                let (pair, s) = coideal_case(dim, q, cr(1.0), &cp)?;
                let inputs = json!({ "q": qv, "dim": dim, "coideal": cp_json(&cp) });
                run(&mut camp, "exact", inputs, &pair, &s, p.tol, &mut rng);
            }
        }
    }
    let bp = poly_params(&p.basic)?;
    let pair = build_basic_representation(p.basic_n, &bp)?;
    let (fit, _) = fit_structure_constants(&pair)?;
    for _ in 0..p.basic_samples {
        let inputs = json!({ "params": p.basic, "n": p.basic_n, "constants": structure_json(&fit) });
        run(&mut camp, "basic", inputs, &pair, &fit, p.basic_tol, &mut rng);
    }
    Ok(Outputs { echo: echo(&p), campaign: camp, variant: Some(variant.name().into()), table: None })
}

pub fn verify_re(job: &JobConfig, seed: u64, tol: Option<f64>) -> Res {
    re_campaign(job, seed, tol, false)
}

pub fn verify_dual_re(job: &JobConfig, seed: u64, tol: Option<f64>) -> Res {
    re_campaign(job, seed, tol, true)
}

pub fn verify_boundary_aw(job: &JobConfig, seed: u64, tol: Option<f64>) -> Res {
    let p: BoundaryParams = load(job, tol)?;
    let mut camp = Campaign::default();
    for (r, rates) in rate_sets(&p.rate_sets, p.random_rate_sets, seed)? {
        for &jt in &p.spins_twice {
            let rep = build_spin_rep(jt, rates.q);
            let inputs = json!({ "rates": rates_json(&r), "spin_twice": jt });
            let pair = asep::boundary_pair_finite(&rates, &rep)?;
            let qv = asep::boundary_casimir(&rep)?;
            let derived = asep::boundary_aw_constants_derived(&rates, qv);
            let nominal = asep::boundary_aw_constants(&rates, qv);
            match aw_residual(&pair, &derived) {
                Ok((r1, r2)) => camp.below("boundary_aw", inputs.clone(), r1.max(r2), p.tol),
                Err(e) => camp.error("boundary_aw", inputs.clone(), &e),
            }
            let nominal_res = aw_residual(&pair, &nominal).map(|(a, b)| a.max(b));
            // A two-dimensional pair cannot separate ρ, ω and η, so the fit needs dim >= 3.
            let fit = if jt >= 2 { Some(fit_structure_constants(&pair)) } else { None };
            if let Some(Ok((_, res))) = &fit {
                camp.below("boundary_fit_residual", inputs.clone(), *res, p.fit_tol);
            }
            if let Some(Err(e)) = &fit {
                camp.error("boundary_fit_residual", inputs.clone(), e);
            }
            camp.info(
                "boundary_constants",
                inputs,
                json!({
                    "casimir": cj(qv),
                    "derived": structure_json(&derived),
                    "nominal": structure_json(&nominal),
                    "nominal_residual": nominal_res.map(|x| json!(x)).unwrap_or_else(|e| json!(e.to_string())),
                    "fitted": match &fit {
                        Some(Ok((f, res))) => json!({ "constants": structure_json(f), "residual": res }),
                        _ => Value::Null,
                    },
                }),
            );
        }
    }
    Ok(outputs(echo(&p), camp))
}

pub fn verify_charges(job: &JobConfig, seed: u64, tol: Option<f64>) -> Res {
    let p: ChargeParams = load(job, tol)?;
    let mut camp = Campaign::default();
    for (r, rates) in rate_sets(&p.rate_sets, p.random_rate_sets, seed)? {
        for &l in &p.lengths {
            let inputs = json!({ "rates": rates_json(&r), "L": l });
            for (name, which) in [("charge_right", Boundary::Right), ("charge_left", Boundary::Left)] {
                match asep::conserved_charge_residual(&rates, l, which) {
                    Ok(x) => camp.below(name, inputs.clone(), x, p.tol),
                    Err(e) => camp.error(name, inputs.clone(), &e),
                }
            }
            camp.info("charge_left_vs_invariant", inputs.clone(), json!(asep::left_charge_dual_residual(&rates, l)));
            let x = rates.q.sqrt_q;
            let mut gi = inputs;
            gi["x"] = json!(x);
            camp.below("gauge", gi, gauge_residual(l, x), p.gauge_tol);
        }
    }
    Ok(outputs(echo(&p), camp))
}

pub fn asep_solve(job: &JobConfig, _seed: u64, tol: Option<f64>) -> Res {
    let p: SolveParams = load(job, tol)?;
    let r = p.rates;
    let rates = ASEPRates::new(r.alpha, r.beta, r.gamma, r.delta, r.q).map_err(|e| CliError::Config(e.to_string()))?;
    let mut camp = Campaign::default();
    kappa_info(&mut camp, &r, &rates);
    let mpa = asep::build_mpa(&rates, p.l)?;
    let inputs = json!({ "rates": rates_json(&r), "L": p.l });
    let inv = asep::mpa_invariants(&mpa.d0, &mpa.d1, &mpa.w_vec, &mpa.v_vec, &rates, mpa.x0);
    camp.below("mpa_invariants", inputs.clone(), inv.max(), p.tol);
    let obs = asep::observables(&mpa, p.l)?;
    let o = &obs.observables;
    let spread = obs.bond_currents.iter().fold(0.0f64, |m, j| m.max((j - obs.current_ratio).abs()));
    camp.below("current_uniformity", inputs.clone(), spread, p.tol);
    let two: Vec<Value> = o.two_point.iter().map(|((i, j), v)| json!([i, j, v])).collect();
    camp.info(
        "observables",
        inputs.clone(),
        json!({ "z_l": o.z_l, "density": o.density, "current": o.current, "two_point": two, "x0": mpa.x0 }),
    );
    if p.l <= MAX_SITES {
        let dist = asep::mpa_distribution(&mpa, p.l)?;
        let sd = stationary_distribution(&build_generator(&rates, p.l)?)?;
        camp.below("oracle_tv", inputs.clone(), total_variation(&dist, &sd.probs), p.oracle_tol);
        let oo = oracle_observables(&sd, &rates);
        camp.below("oracle_current", inputs, (oo.observables.current - o.current).abs(), p.oracle_tol);
    }
    Ok(outputs(echo(&p), camp))
}

pub fn asep_oracle_compare(job: &JobConfig, seed: u64, tol: Option<f64>) -> Res {
    let p: CompareParams = load(job, tol)?;
    let mut camp = Campaign::default();
    for (r, rates) in rate_sets(&p.rate_sets, p.random_rate_sets, seed)? {
        kappa_info(&mut camp, &r, &rates);
        for &l in &p.lengths {
            let inputs = json!({ "rates": rates_json(&r), "L": l });
            let res = (|| -> awcore::Result<(f64, f64)> {
                let mpa = asep::build_mpa(&rates, l)?;
                let dist = asep::mpa_distribution(&mpa, l)?;
                let sd = stationary_distribution(&build_generator(&rates, l)?)?;
                let oo = oracle_observables(&sd, &rates);
                let j = asep::observables(&mpa, l)?.observables.current;
                Ok((total_variation(&dist, &sd.probs), (j - oo.observables.current).abs()))
            })();
            match res {
                Ok((tv, dj)) => {
                    camp.below("tv_distance", inputs.clone(), tv, p.tol);
                    camp.below("current", inputs, dj, p.current_tol);
                }
                Err(e) => camp.error("tv_distance", inputs, &e),
            }
        }
    }
    Ok(outputs(echo(&p), camp))
}

pub fn xxz_spectrum(job: &JobConfig, seed: u64, tol: Option<f64>) -> Res {
    let p: XxzParams = load(job, tol)?;
    let variant = parse_xxz_variant(&p.variant)?;
    if p.mu.is_empty() {
        return Err(CliError::Config("mu needs at least one value".into()));
    }
    let mut camp = Campaign::default();
    for (r, rates) in rate_sets(&p.rate_sets, p.random_rate_sets, seed)? {
        for &l in &p.lengths {
            let g = build_generator(&rates, l)?;
            let base = build_xxz(&rates, l, p.mu[0], variant)?;
            for &mu in &p.mu {
                let inputs = json!({ "rates": rates_json(&r), "L": l, "mu": mu });
                let m = build_xxz(&rates, l, mu, variant)?;
                match spectrum_compare(&g, &m) {
                    Ok(d) => camp.below("spectrum", inputs.clone(), d, p.tol),
                    Err(e) => camp.error("spectrum", inputs.clone(), &e),
                }
                if mu != p.mu[0] {
                    let mut mi = inputs;
                    mi["mu_ref"] = json!(p.mu[0]);
                    match spectrum_distance(&base, &m) {
                        Ok(d) => camp.below("mu_independence", mi, d, p.mu_tol),
                        Err(e) => camp.error("mu_independence", mi, &e),
                    }
                }
            }
            if variant == XxzVariant::Ratio {
                let nominal = build_xxz(&rates, l, p.mu[0], XxzVariant::Nominal)?;
                let d = spectrum_compare(&g, &nominal).map(|x| json!(x)).unwrap_or_else(|e| json!(e.to_string()));
                camp.info("nominal_couplings_distance", json!({ "rates": rates_json(&r), "L": l }), d);
            }
        }
    }
    Ok(Outputs { echo: echo(&p), campaign: camp, variant: Some(p.variant.clone()), table: None })
}

pub fn polytable(job: &JobConfig, _seed: u64, tol: Option<f64>) -> Res {
    let p: PolytableParams = load(job, tol)?;
    let ap = poly_params(&PolyCfg { a: p.a, b: p.b, c: p.c, d: p.d, q: p.q })?;
    let mut camp = Campaign::default();
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["n".to_string(), "a_n".into(), "b_n".into(), "c_n".into(), "lambda_star_n".into(), "h_n".into()];
    header.extend(p.x.iter().map(|x| format!("p_n({})", fmt_f64(*x))));
    w.write_record(&header)?;
    let a_sum = ap.a + cr(1.0) / ap.a;
    for n in 0..=p.n_max {
        let (an, bn, cn) = recurrence_coeffs(n, &ap)?;
        let lam = dual_eigenvalue(n, &ap);
        let h = aw_norm(n, &ap);
        let vals: Vec<C64> = p.x.iter().map(|&x| aw_poly_eval(n, cr(x), &ap)).collect::<awcore::Result<_>>()?;
        let mut row = vec![n.to_string()];
        row.extend([an, bn, cn, lam, h].iter().map(|z| fmt_f64(z.re)));
        row.extend(vals.iter().map(|z| fmt_f64(z.re)));
        w.write_record(&row)?;
        let inputs = json!({ "n": n });
        let sum_err = (an + bn + cn - a_sum).norm() / (1.0 + a_sum.norm() + bn.norm() + cn.norm());
        camp.below("row_sum", inputs.clone(), sum_err, p.tol);
        let imag = [an, bn, cn, lam, h].iter().chain(&vals).fold(0.0f64, |m, z| m.max(z.im.abs()));
        camp.below("real_entries", inputs, imag, p.tol);
        if n == 0 {
            camp.below("c_0", json!({ "n": 0 }), cn.norm(), p.tol);
            let want = cr(1.0) + ap.abcd() / ap.q.q;
            camp.below("lambda_star_0", json!({ "n": 0 }), (lam - want).norm() / want.norm(), p.tol);
            let p0 = vals.iter().fold(0.0f64, |m, z| m.max((z - 1.0).norm()));
            camp.below("p_0", json!({ "n": 0, "x": p.x }), p0, p.tol);
        }
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    Ok(Outputs { echo: echo(&p), campaign: camp, variant: None, table: Some((p.table.clone(), bytes)) })
}
