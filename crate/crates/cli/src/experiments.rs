use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::Serialize;
use serde_json::{json, Value as Json};

use genericity::avgcase::{
    impagliazzo_check, levin_check, markov_generic_bound, separation_report, Atom, AvgReport, AvgTolerances,
    AvgVerdict, MeasuredFunction, Monomial, Value,
};
use genericity::density::{
    classify_convergence, frequency, spherical_vs_volume, FnPredicate, FrequencyPoint, FrequencySeries, Geometry,
    Mode, SizedDomain, Tolerances, DEFAULT_CONFIDENCE,
};
use genericity::numeric::{linear_fit, ln_ratio, ratio_to_f64};
use genericity::pcp::{
    algorithm_two, has_prefix_pair, no_prefix_count, prefix_pair_bound, search_solution_capped, sphere_count,
    HasPrefixPair, NoPrefixPair, PcpDomain, PcpError, PcpInstance, DEFAULT_STATE_CAP,
};
use genericity::threesat::{
    all_eight_density_series, brute_force_sat, build_counting_dfa, core_clauses, core_instance, growth_rate,
    parse_instance, Cnf3Instance, DensityRoute, DEFAULT_ITERATIONS, DEFAULT_TOLERANCE, DEFAULT_VAR_CAP,
};
use genericity::turing::{
    algorithm_one, first_step_survival, nonneg_walk_fraction, nonneg_walk_fraction_enumerated, SurvivesFirstStep,
    verdict_is_sound, TmProgram, TuringDomain, WALK_ENUMERATION_MAX,
};
use genericity::{Answer, RngState};

use crate::config::{ExperimentConfig, ExperimentId, ModeChoice};
use crate::RunError;

/// One named pass/fail comparison.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), passed, detail: detail.into() }
    }
}

/// Data behind [`crate::export_plot_data`].
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PlotData {
    Series { series: FrequencySeries },
    PartialSums { report: AvgReport },
    Eigenvalues { lambda_full: f64, lambda_omit: f64 },
}

pub struct Outcome {
    pub data: Json,
    pub checks: Vec<Check>,
    pub plot: Option<PlotData>,
}

fn rational(r: &BigRational) -> String {
    r.to_string()
}

fn seed(cfg: &ExperimentConfig) -> RngState {
    RngState::new(cfg.seed.unwrap_or(0))
}

fn confidence(cfg: &ExperimentConfig) -> f64 {
    cfg.confidence.unwrap_or(DEFAULT_CONFIDENCE)
}

fn sampled(cfg: &ExperimentConfig, default_trials: u64) -> Mode {
    Mode::MonteCarlo { trials: cfg.trials.unwrap_or(default_trials), confidence: confidence(cfg) }
}

fn exact_value(p: &FrequencyPoint) -> BigRational {
    p.estimate.as_exact().cloned().expect("exact mode yields rationals")
}

pub fn dispatch(id: ExperimentId, cfg: &ExperimentConfig) -> Result<Outcome, RunError> {
    match id {
        ExperimentId::HaltingN1Exact => halting_exact(cfg),
        ExperimentId::FirstStep => first_step(cfg),
        ExperimentId::HaltingGenericity => halting_genericity(cfg),
        ExperimentId::WalkOracle => walk_oracle(cfg),
        ExperimentId::PcpExact => pcp_exact(cfg),
        ExperimentId::PcpMc => pcp_mc(cfg),
        ExperimentId::PcpBound => pcp_bound(cfg),
        ExperimentId::ThreesatCounts => threesat_counts(cfg),
        ExperimentId::ThreesatEigen => threesat_eigen(cfg),
        ExperimentId::ThreesatDensity => threesat_density(cfg),
        ExperimentId::AvpLevin => avp_levin(cfg),
        ExperimentId::AvpSeparation => avp_separation(cfg),
        ExperimentId::MarkovBound => markov_bound(cfg),
        ExperimentId::StolzConsistency => stolz(cfg),
        ExperimentId::Battery => unreachable!("batteries are expanded by run"),
    }
}

fn halting_exact(cfg: &ExperimentConfig) -> Result<Outcome, RunError> {
    let n_list = cfg.n_list.clone().unwrap_or(vec![1]);
    let domain = TuringDomain::with_cap(cfg.enumeration_cap.unwrap_or(TuringDomain::DEFAULT_CAP));
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    let mut points = Vec::new();
    for &n in &n_list {
        let (mut yes, mut no, mut unknown) = (0u64, 0u64, 0u64);
        for program in domain.enumerate_sphere(n)? {
            match algorithm_one(&program).answer {
                Answer::Yes => yes += 1,
                Answer::No => no += 1,
                Answer::DontKnow => unknown += 1,
            }
        }
        let point = FrequencyPoint::exact(n, BigUint::from(yes + no), BigUint::from(yes + no + unknown));
        let decided = exact_value(&point);
        if n == 1 {
            checks.push(Check::new(
                "n=1 verdict counts",
                (yes, no, unknown) == (16, 32, 16),
                format!("Yes {yes}, No {no}, DontKnow {unknown}"),
            ));
            checks.push(Check::new("n=1 decided fraction", decided == BigRational::new(3.into(), 4.into()), rational(&decided)));
        }
        rows.push(json!({ "n": n, "yes": yes, "no": no, "dont_know": unknown, "decided": rational(&decided) }));
        points.push(point);
    }
    let series = FrequencySeries::new(Geometry::Sphere, "decided-by-algorithm-one", points)?;
    Ok(Outcome { data: json!({ "verdicts": rows }), checks, plot: Some(PlotData::Series { series }) })
}

fn first_step(cfg: &ExperimentConfig) -> Result<Outcome, RunError> {
    let n_list = cfg.n_list.clone().unwrap_or(vec![1, 2, 10, 100]);
    let cap = cfg.enumeration_cap.unwrap_or(TuringDomain::DEFAULT_CAP);
    let domain = TuringDomain::with_cap(cap);
    let sigmas = cfg.sigmas.unwrap_or(4.0);
    let rng = seed(cfg);
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    let mut points = Vec::new();
    for &n in &n_list {
        let formula = first_step_survival(n);
        let enumerable = domain.sphere_count(n).is_some_and(|c| c <= BigUint::from(cap));
        let exact = match cfg.mode.unwrap_or(ModeChoice::Auto) {
            ModeChoice::Exact => true,
            ModeChoice::MonteCarlo => false,
            ModeChoice::Auto => enumerable,
        };
        let mode = if exact { Mode::Exact } else { sampled(cfg, 100_000) };
        let point = match frequency(&domain, &SurvivesFirstStep, n, Geometry::Sphere, mode, rng.child(n)) {
            Ok(p) => p,
            Err(e) => {
                checks.push(Check::new(format!("n={n}"), false, e.to_string()));
                rows.push(json!({ "n": n, "error": e.to_string() }));
                continue;
            }
        };
        let (passed, detail) = match point.estimate.as_exact() {
            Some(v) => (*v == formula, format!("enumerated {v}, formula {formula}")),
            None => {
                let p = ratio_to_f64(&formula);
                let trials = point.trials.to_f64().unwrap_or(f64::INFINITY);
                let sigma = (p * (1.0 - p) / trials).sqrt();
                let z = (point.value() - p) / sigma;
                (z.abs() <= sigmas, format!("estimate {:.6}, formula {p:.6}, z = {z:.3}", point.value()))
            }
        };
        checks.push(Check::new(format!("n={n}"), passed, detail));
        rows.push(json!({ "n": n, "formula": rational(&formula), "point": point }));
        points.push(point);
    }
    let series = FrequencySeries::new(Geometry::Sphere, "survives-first-step", points)?;
    Ok(Outcome { data: json!({ "points": rows }), checks, plot: Some(PlotData::Series { series }) })
}

fn halting_genericity(cfg: &ExperimentConfig) -> Result<Outcome, RunError> {
    let n_list = cfg.n_list.clone().unwrap_or(vec![10, 100, 1000, 10_000]);
    let domain = TuringDomain::new();
    let mode = Mode::MonteCarlo { trials: cfg.trials.unwrap_or(10_000), confidence: cfg.confidence.unwrap_or(0.99) };
    let rng = seed(cfg);
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    let mut points = Vec::new();
    let mut total_wrong = 0;
    for &n in &n_list {
        let counts = [AtomicU64::new(0), AtomicU64::new(0), AtomicU64::new(0)];
        let wrong = AtomicU64::new(0);
        let predicate = FnPredicate::new("decided-by-algorithm-one", |p: &TmProgram| {
            let v = algorithm_one(p);
            let slot = match v.answer {
                Answer::Yes => 0,
                Answer::No => 1,
                Answer::DontKnow => 2,
            };
            counts[slot].fetch_add(1, Ordering::Relaxed);
            if !verdict_is_sound(p, &v) {
                wrong.fetch_add(1, Ordering::Relaxed);
            }
            v.is_decided()
        });
        match frequency(&domain, &predicate, n, Geometry::Sphere, mode, rng.child(n)) {
            Ok(point) => {
                let wrong = wrong.load(Ordering::Relaxed);
                total_wrong += wrong;
                let [yes, no, unknown] = counts.map(|c| c.load(Ordering::Relaxed));
                rows.push(json!({ "n": n, "point": point, "yes": yes, "no": no, "dont_know": unknown, "wrong_verdicts": wrong }));
                points.push(point);
            }
            Err(e) => {
                checks.push(Check::new(format!("n={n}"), false, e.to_string()));
                rows.push(json!({ "n": n, "error": e.to_string() }));
            }
        }
    }
    let overlapping = points.windows(2).all(|w| w[1].value() + w[1].ci_half_width >= w[0].value() - w[0].ci_half_width);
    checks.push(Check::new("nondecreasing within confidence intervals", overlapping, format!("{:?}", points.iter().map(|p| p.value()).collect::<Vec<_>>())));
    if let Some(last) = points.last() {
        checks.push(Check::new(
            format!("decided fraction at n={} at least 0.8", last.n),
            last.value() >= 0.8,
            format!("{:.4}", last.value()),
        ));
    }
    checks.push(Check::new("no wrong verdicts", total_wrong == 0, format!("{total_wrong} wrong")));
    let series = FrequencySeries::new(Geometry::Sphere, "decided-by-algorithm-one", points)?;
    Ok(Outcome { data: json!({ "points": rows }), checks, plot: Some(PlotData::Series { series }) })
}

fn walk_oracle(cfg: &ExperimentConfig) -> Result<Outcome, RunError> {
    let k_max = cfg.k_max.unwrap_or(20);
    let mut rows = Vec::new();
    let mut mismatched = Vec::new();
    for k in 0..=k_max {
        let closed = nonneg_walk_fraction(k);
        let enumerated = nonneg_walk_fraction_enumerated(k);
        if enumerated.as_ref() != Some(&closed) {
            mismatched.push(k);
        }
        rows.push(json!({ "k": k, "closed": rational(&closed), "enumerated": enumerated.as_ref().map(rational) }));
    }
    let detail = if k_max > WALK_ENUMERATION_MAX {
        format!("enumeration stops at k = {WALK_ENUMERATION_MAX}; mismatched or missing {mismatched:?}")
    } else {
        format!("mismatched {mismatched:?}")
    };
    let checks = vec![Check::new(format!("closed form equals enumeration for k <= {k_max}"), mismatched.is_empty(), detail)];
    Ok(Outcome { data: json!({ "walks": rows }), checks, plot: None })
}

fn pcp_exact(cfg: &ExperimentConfig) -> Result<Outcome, RunError> {
    let k = cfg.k.unwrap_or(2);
    let n_list = cfg.n_list.clone().unwrap_or(vec![1, 2]);
    let depth = cfg.depth.unwrap_or(6);
    let state_cap = cfg.state_cap.unwrap_or(DEFAULT_STATE_CAP);
    let domain = PcpDomain::with_cap(k, cfg.enumeration_cap.unwrap_or(PcpDomain::DEFAULT_CAP));
    // the closed-form count is deliberately not consulted
    let enumerated = FnPredicate::new("no-prefix-pair", |i: &PcpInstance| !has_prefix_pair(i));
    let known = [(1, (2, 4)), (2, (121, 324))];
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    let mut points = Vec::new();
    for &n in &n_list {
        let point = match frequency(&domain, &enumerated, n, Geometry::Sphere, Mode::Exact, RngState::new(0)) {
            Ok(p) => p,
            Err(e) => {
                checks.push(Check::new(format!("n={n}"), false, e.to_string()));
                rows.push(json!({ "n": n, "error": e.to_string() }));
                continue;
            }
        };
        let value = exact_value(&point);
        let closed = BigRational::new(no_prefix_count(n, k as u64).into(), sphere_count(n, k as u64).direct.into());
        checks.push(Check::new(format!("n={n} enumeration equals closed form"), value == closed, format!("{value} vs {closed}")));
        if k == 2 {
            if let Some((_, (a, b))) = known.iter().find(|(m, _)| *m == n) {
                let want = BigRational::new((*a).into(), (*b).into());
                checks.push(Check::new(format!("n={n} frequency {a}/{b}"), value == want, rational(&value)));
            }
        }

        let (mut no_verdicts, mut confirmed, mut wrong, mut exhausted) = (0u64, 0u64, 0u64, 0u64);
        let mut instances = 0u64;
        for instance in domain.enumerate_sphere(n)? {
            instances += 1;
            if algorithm_two(&instance).answer != Answer::No {
                continue;
            }
            no_verdicts += 1;
            match search_solution_capped(&instance, depth, state_cap) {
                Ok(None) => confirmed += 1,
                Ok(Some(_)) => wrong += 1,
                Err(PcpError::SearchExhausted { .. }) => exhausted += 1,
                Err(e) => return Err(e.into()),
            }
        }
        checks.push(Check::new(
            format!("n={n} no wrong No verdicts to depth {depth}"),
            wrong == 0,
            format!("{no_verdicts} No verdicts over {instances} instances, {wrong} wrong, {exhausted} searches exhausted"),
        ));
        rows.push(json!({
            "n": n,
            "point": point,
            "closed_form": rational(&closed),
            "instances": instances,
            "no_verdicts": no_verdicts,
            "confirmed_no_solution": confirmed,
            "wrong_no_verdicts": wrong,
            "search_exhausted": exhausted,
            "depth": depth,
        }));
        points.push(point);
    }
    let series = FrequencySeries::new(Geometry::Sphere, "no-prefix-pair", points)?;
    Ok(Outcome { data: json!({ "k": k, "points": rows }), checks, plot: Some(PlotData::Series { series }) })
}

fn pcp_mc(cfg: &ExperimentConfig) -> Result<Outcome, RunError> {
    let k = cfg.k.unwrap_or(2);
    let n_list = cfg.n_list.clone().unwrap_or(vec![5, 10, 15, 20]);
    let sigmas = cfg.sigmas.unwrap_or(4.0);
    let domain = PcpDomain::new(k);
    let predicate = HasPrefixPair::new(k);
    let mode = sampled(cfg, 100_000);
    let rng = seed(cfg);
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    let mut points = Vec::new();
    for &n in &n_list {
        let point = match frequency(&domain, &predicate, n, Geometry::Sphere, mode, rng.child(n)) {
            Ok(p) => p,
            Err(e) => {
                checks.push(Check::new(format!("n={n}"), false, e.to_string()));
                rows.push(json!({ "n": n, "error": e.to_string() }));
                continue;
            }
        };
        let bound = prefix_pair_bound(n, k as u64);
        let exact = frequency(&domain, &predicate, n, Geometry::Sphere, Mode::Exact, RngState::new(0))?;
        let slack = sigmas * point.std_error();
        let passed = point.value() <= ratio_to_f64(&bound) + slack;
        checks.push(Check::new(
            format!("n={n} below bound"),
            passed,
            format!("estimate {:.6} (sigma {:.2e}), bound {:.6}", point.value(), point.std_error(), ratio_to_f64(&bound)),
        ));
        rows.push(json!({ "n": n, "point": point, "bound": rational(&bound), "bound_value": ratio_to_f64(&bound), "exact": exact.value() }));
        points.push(point);
    }
    let positive: Vec<&FrequencyPoint> = points.iter().filter(|p| p.value() > 0.0).collect();
    let slope = (positive.len() >= 2).then(|| {
        let xs: Vec<f64> = positive.iter().map(|p| p.n as f64).collect();
        let ys: Vec<f64> = positive.iter().map(|p| p.value().ln()).collect();
        linear_fit(&xs, &ys).0
    });
    checks.push(Check::new(
        "log-frequency slope negative",
        slope.is_some_and(|s| s < 0.0),
        format!("slope {slope:?} over {} nonzero points", positive.len()),
    ));
    let series = FrequencySeries::new(Geometry::Sphere, "has-prefix-pair", points)?;
    Ok(Outcome {
        data: json!({ "k": k, "points": rows, "log_slope": slope }),
        checks,
        plot: Some(PlotData::Series { series }),
    })
}

fn pcp_bound(cfg: &ExperimentConfig) -> Result<Outcome, RunError> {
    let k = cfg.k.unwrap_or(2);
    let n_list = cfg.n_list.clone().unwrap_or((1..=20).collect());
    let domain = PcpDomain::new(k);
    let mut rows = Vec::new();
    let mut points = Vec::new();
    let mut above = Vec::new();
    for &n in &n_list {
        let point = frequency(&domain, &HasPrefixPair::new(k), n, Geometry::Sphere, Mode::Exact, RngState::new(0))?;
        let bound = prefix_pair_bound(n, k as u64);
        let value = exact_value(&point);
        if value > bound {
            above.push(n);
        }
        rows.push(json!({ "n": n, "frequency": rational(&value), "value": point.value(), "bound": rational(&bound) }));
        points.push(point);
    }
    let series = FrequencySeries::new(Geometry::Sphere, "has-prefix-pair", points)?;
    let complement = FrequencySeries::new(
        Geometry::Sphere,
        "no-prefix-pair",
        series.points.iter().map(|p| FrequencyPoint::exact(p.n, &p.trials - &p.hits, p.trials.clone())).collect(),
    )?;
    let convergence = classify_convergence(&complement, 1.0, &Tolerances::default())?;
    let checks = vec![
        Check::new("exact frequency within bound", above.is_empty(), format!("above at {above:?}")),
        Check::new(
            "no-prefix frequency tends to 1 superpolynomially",
            convergence.classification.is_superpolynomial(),
            format!("{:?}", convergence.classification),
        ),
    ];
    Ok(Outcome {
        data: json!({ "k": k, "points": rows, "convergence": convergence }),
        checks,
        plot: Some(PlotData::Series { series }),
    })
}

fn threesat_counts(cfg: &ExperimentConfig) -> Result<Outcome, RunError> {
    let lengths = cfg.lengths.clone().unwrap_or((0..=14).collect());
    let max = *lengths.last().expect("validated nonempty") as usize;
    let dfa = build_counting_dfa(&[]);
    let counts = dfa.word_counts(max);
    let mut rows = Vec::new();
    let mut mismatched = Vec::new();
    for &len in &lengths {
        let words = dfa.words_of_length(len as usize);
        let parsed = words.iter().all(|w| {
            let text: String = w.iter().map(|s| s.ascii()).collect();
            parse_instance(&text).is_ok_and(|i| i.size() == len)
        });
        if BigUint::from(words.len()) != counts[len as usize] || !parsed {
            mismatched.push(len);
        }
        rows.push(json!({ "length": len, "count": counts[len as usize].to_string(), "walked": words.len() }));
    }
    let core = core_instance();
    let core_sat = brute_force_sat(&core, DEFAULT_VAR_CAP)?;
    let minimal = (0..8).all(|drop| {
        let mut clauses = core.clauses.clone();
        clauses.remove(drop);
        brute_force_sat(&Cnf3Instance::new(clauses), DEFAULT_VAR_CAP).unwrap_or(false)
    });
    let checks = vec![
        Check::new("counts equal automaton walk", mismatched.is_empty(), format!("mismatched at {mismatched:?}")),
        Check::new("core clauses unsatisfiable", !core_sat, core.render_unicode()),
        Check::new("every seven core clauses satisfiable", minimal, ""),
    ];
    Ok(Outcome {
        data: json!({ "counts": rows, "core": core.render_unicode(), "core_satisfiable": core_sat, "automaton": dfa.export() }),
        checks,
        plot: None,
    })
}

struct Growth {
    full: f64,
    omit: Vec<f64>,
    data: Json,
}

fn growth(cfg: &ExperimentConfig) -> Result<Growth, RunError> {
    let iterations = cfg.power_iterations.unwrap_or(DEFAULT_ITERATIONS);
    let tol = cfg.power_tolerance.unwrap_or(DEFAULT_TOLERANCE);
    let full = growth_rate(&build_counting_dfa(&[]), iterations, tol)?;
    let omit = core_clauses()
        .iter()
        .map(|c| growth_rate(&build_counting_dfa(std::slice::from_ref(c)), iterations, tol))
        .collect::<Result<Vec<_>, _>>()?;
    let data = json!({ "tolerance": tol, "full": full, "omit_one": omit });
    Ok(Growth { full: full.lambda, omit: omit.iter().map(|g| g.lambda).collect(), data })
}

fn threesat_eigen(cfg: &ExperimentConfig) -> Result<Outcome, RunError> {
    let g = growth(cfg)?;
    let lambda_omit = g.omit.iter().copied().fold(0.0, f64::max);
    let checks = vec![Check::new(
        "omitting a core clause lowers the growth rate",
        g.omit.iter().all(|&l| l < g.full),
        format!("full {:.12}, largest omit {:.12}", g.full, lambda_omit),
    )];
    Ok(Outcome {
        data: json!({ "growth": g.data, "lambda_full": g.full, "lambda_omit": lambda_omit, "ratio": lambda_omit / g.full }),
        checks,
        plot: Some(PlotData::Eigenvalues { lambda_full: g.full, lambda_omit }),
    })
}

fn threesat_density(cfg: &ExperimentConfig) -> Result<Outcome, RunError> {
    let lengths = cfg.lengths.clone().unwrap_or(vec![64, 128, 256]);
    let tolerance = cfg.ratio_tolerance.unwrap_or(0.05);
    let mask = all_eight_density_series(&lengths, DensityRoute::MaskProduct)?;
    let inclusion = all_eight_density_series(&lengths, DensityRoute::InclusionExclusion)?;
    let g = growth(cfg)?;
    let lambda_omit = g.omit.iter().copied().fold(0.0, f64::max);
    let predicted = lambda_omit / g.full;

    let deltas: Vec<BigRational> = mask.points.iter().map(exact_value).collect();
    let nondecreasing = deltas.windows(2).all(|w| w[0] <= w[1]);
    let one = BigRational::one();
    let steps: Vec<Json> = mask
        .points
        .windows(2)
        .zip(deltas.windows(2))
        .map(|(p, d)| {
            let span = (p[1].n - p[0].n) as f64;
            let observed = ((ln_ratio(&(&one - &d[1])) - ln_ratio(&(&one - &d[0]))) / span).exp();
            json!({ "from": p[0].n, "to": p[1].n, "observed_ratio": observed, "predicted_ratio": predicted })
        })
        .collect();
    let ratios_fit = steps.iter().all(|s| (s["observed_ratio"].as_f64().unwrap_or(f64::NAN) - predicted).abs() <= tolerance);
    let checks = vec![
        Check::new("mask product equals inclusion-exclusion", mask == inclusion, ""),
        Check::new("density nondecreasing", nondecreasing, deltas.iter().map(rational).map(|s| shorten(&s)).collect::<Vec<_>>().join(", ")),
        Check::new(
            format!("per-step ratio of 1 - delta within {tolerance} of lambda_omit / lambda_full"),
            ratios_fit,
            format!("predicted {predicted:.9}"),
        ),
    ];
    Ok(Outcome {
        data: json!({ "series": mask, "growth": g.data, "decay_steps": steps }),
        checks,
        plot: Some(PlotData::Series { series: mask }),
    })
}

fn shorten(s: &str) -> String {
    if s.len() <= 24 {
        s.to_string()
    } else {
        format!("{}..({} chars)", &s[..20], s.len())
    }
}

fn avg_tolerances(cfg: &ExperimentConfig) -> AvgTolerances {
    let d = AvgTolerances::default();
    AvgTolerances {
        divergence_bound: cfg.divergence_bound.unwrap_or(d.divergence_bound),
        ratio_threshold: cfg.ratio_threshold.unwrap_or(d.ratio_threshold),
        tail_fraction: cfg.tail_fraction.unwrap_or(d.tail_fraction),
        bounded_slack: cfg.bounded_slack.unwrap_or(d.bounded_slack),
    }
}

fn avp_levin(cfg: &ExperimentConfig) -> Result<Outcome, RunError> {
    let horizon = cfg.horizon.unwrap_or(200);
    let epsilons = cfg.epsilon.clone().unwrap_or(vec![0.5, 1.0]);
    let tol = avg_tolerances(cfg);
    let example = MeasuredFunction::levin_example();
    let n_list: Vec<u64> = (1..=horizon).collect();
    let mut levin = Vec::new();
    let mut impagliazzo = Vec::new();
    let mut checks = Vec::new();
    for &eps in &epsilons {
        let report = levin_check(&example, eps, horizon, &tol);
        let want = if eps == 0.5 {
            Some(AvgVerdict::ConvergesAtHorizon)
        } else if eps == 1.0 {
            Some(AvgVerdict::DivergesAtHorizon)
        } else {
            None
        };
        if let Some(want) = want {
            checks.push(Check::new(format!("Levin sum at epsilon {eps}"), report.verdict == want, format!("{:?}", report.verdict)));
        }
        levin.push(report);
        impagliazzo.push(impagliazzo_check(&example, eps, &n_list, &tol)?);
    }
    if let Some(i) = epsilons.iter().position(|&e| e == 0.5) {
        let bounded = impagliazzo[i].verdict == AvgVerdict::PolynomiallyBoundedAtHorizon;
        checks.push(Check::new("ball criterion agrees at epsilon 0.5", bounded, format!("{:?}", impagliazzo[i].verdict)));
    }
    let plot = levin.first().cloned().map(|report| PlotData::PartialSums { report });
    Ok(Outcome { data: json!({ "function": example.label(), "levin": levin, "impagliazzo": impagliazzo }), checks, plot })
}

fn avp_separation(cfg: &ExperimentConfig) -> Result<Outcome, RunError> {
    let n_list = cfg.n_list.clone().unwrap_or((1..=cfg.horizon.unwrap_or(200)).collect());
    let report = separation_report(&n_list, &avg_tolerances(cfg))?;
    let per_polynomial: Vec<Json> = report
        .example_generic
        .iter()
        .map(|c| {
            json!({
                "polynomial": c.check.polynomial_text,
                "crossover": c.crossover,
                "zero_past_crossover": c.zero_past_crossover,
                "passes_generic_test": c.check.passes,
                "classification": c.check.convergence.classification,
                "frequency_by_n": c.check.series.values(),
            })
        })
        .collect();
    let spiked: Vec<&str> = report.spiked_generic.iter().map(|c| c.polynomial_text.as_str()).collect();
    let failing = report.example_generic.iter().filter(|c| !c.zero_past_crossover || c.check.passes).count();
    let checks = vec![
        Check::new("example converges under Levin at epsilon 0.5", report.example_levin.verdict == AvgVerdict::ConvergesAtHorizon, format!("{:?}", report.example_levin.verdict)),
        Check::new("example fails every polynomial past its crossover", failing == 0, format!("{} polynomials, {failing} not failing", per_polynomial.len())),
        Check::new("spiked function passes the generic test", !spiked.is_empty(), spiked.join(", ")),
        Check::new("spiked function diverges under Levin", report.spiked_levin.verdict == AvgVerdict::DivergesAtHorizon, format!("{:?}", report.spiked_levin.verdict)),
        Check::new("incomparable", report.incomparable(), ""),
    ];
    Ok(Outcome {
        data: json!({
            "n_list": n_list,
            "example_levin": report.example_levin,
            "example_generic": per_polynomial,
            "spiked_generic": spiked,
            "spiked_levin": report.spiked_levin,
            "avp_not_genp": report.avp_not_genp,
            "genp_not_avp": report.genp_not_avp,
        }),
        checks,
        plot: None,
    })
}

/// Random per-sphere atoms with rational values.
fn synthetic_spheres(rng: &mut ChaCha12Rng, spheres: usize) -> Vec<Vec<(u64, u64, u64)>> {
    (0..spheres)
        .map(|_| {
            let atoms = rng.random_range(1..=4);
            (0..atoms).map(|_| (rng.random_range(0..1000), rng.random_range(1..50), rng.random_range(1..=64))).collect()
        })
        .collect()
}

/// Smallest `c` with `E_n[f] <= c·n` on every sphere.
fn premise_constant(spheres: &[Vec<(u64, u64, u64)>]) -> BigRational {
    spheres
        .iter()
        .enumerate()
        .map(|(i, atoms)| {
            let num: u64 = atoms.iter().map(|&(v, c, w)| v * c * w).sum();
            let den: u64 = atoms.iter().map(|&(_, c, w)| c * w).sum();
            BigRational::new(num.into(), BigInt::from(den) * BigInt::from(i + 1))
        })
        .max()
        .unwrap_or_else(BigRational::zero)
}

fn markov_bound(cfg: &ExperimentConfig) -> Result<Outcome, RunError> {
    let n_list = cfg.n_list.clone().unwrap_or((1..=12).collect());
    let count = cfg.synthetic_instances.unwrap_or(200);
    let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed.unwrap_or(0));
    let max_n = *n_list.last().expect("validated nonempty") as usize;
    let mut reports = Vec::new();

    for (c, q, t) in [((1, 1), Monomial::new(1, 0), 1), ((3, 2), Monomial::new(1, 1), 1), ((3, 2), Monomial::new(10, 2), 3), ((5, 1), Monomial::new(1, 3), 7)] {
        let c = BigRational::new(c.0.into(), c.1.into());
        let mf = MeasuredFunction::markov_extremal(c.clone(), q, t);
        reports.push(markov_generic_bound(&mf, c, 1, q, &n_list)?);
    }
    for i in 0..count {
        let spheres = synthetic_spheres(&mut rng, max_n);
        let c = premise_constant(&spheres);
        if c.is_zero() {
            continue;
        }
        let q = Monomial::new(rng.random_range(1..=5), rng.random_range(0..=3));
        let atoms = spheres.clone();
        let mf = MeasuredFunction::new(format!("synthetic #{i}"), 1, move |n| {
            atoms[(n - 1) as usize]
                .iter()
                .map(|&(v, c, w)| Atom::new(Value::int(v), c, BigRational::new(w.into(), 64.into())))
                .collect()
        });
        reports.push(markov_generic_bound(&mf, c, 1, q, &n_list)?);
    }
    let violations: usize = reports.iter().map(|r| r.points.iter().filter(|p| !p.holds).count()).sum();
    let tested: usize = reports.iter().map(|r| r.points.len()).sum();
    let checks = vec![Check::new(
        "violation mass at most 1/q(n) everywhere",
        violations == 0,
        format!("{violations} violations over {} instances and {tested} spheres", reports.len()),
    )];
    let summary: Vec<Json> = reports
        .iter()
        .map(|r| {
            let worst = r
                .points
                .iter()
                .map(|p| ratio_to_f64(&p.violation_mass) / ratio_to_f64(&p.limit))
                .fold(0.0, f64::max);
            json!({ "function": r.function, "bound": r.bound, "all_hold": r.all_hold(), "worst_mass_over_limit": worst })
        })
        .collect();
    Ok(Outcome { data: json!({ "extremal": &reports[..4], "instances": summary }), checks, plot: None })
}

fn stolz(cfg: &ExperimentConfig) -> Result<Outcome, RunError> {
    let k = cfg.k.unwrap_or(2);
    let n_list = cfg.n_list.clone().unwrap_or(vec![5, 10, 15, 20]);
    let domain = PcpDomain::new(k);
    let predicate = NoPrefixPair::new(k);
    let mut rows = Vec::new();
    let mut gaps = Vec::new();
    for &n in &n_list {
        let (sphere, ball) = spherical_vs_volume(&domain, &predicate, n, Mode::Exact, RngState::new(0))?;
        let gap = (exact_value(&ball) - exact_value(&sphere)).abs();
        rows.push(json!({ "n": n, "sphere": sphere.value(), "ball": ball.value(), "gap": ratio_to_f64(&gap), "ln_gap": ln_ratio(&gap) }));
        gaps.push((n, gap));
    }
    let (first, last) = (gaps.first().expect("nonempty"), gaps.last().expect("nonempty"));
    let checks = vec![Check::new(
        format!("ball-sphere gap at n={} below the gap at n={}", last.0, first.0),
        last.1 < first.1,
        format!("{:.3e} vs {:.3e}", ratio_to_f64(&last.1), ratio_to_f64(&first.1)),
    )];
    Ok(Outcome { data: json!({ "k": k, "points": rows }), checks, plot: None })
}
