use anyhow::{bail, Result};
use qcb_core::bounds::{bound_dominance_check, bound_for, bound_probability, fef};
use qcb_core::convertibility::{build_achiever, compare_classes, convertibility_report, ConversionInstance, Family};
use qcb_core::detection::{
    detect_not_eb, detected_threshold, sampled_detection, sweep_csv, threshold_sweep, uniform_grid, DetectionVerdict,
    Scheme,
};
use qcb_core::measurement::channel_probability;
use qcb_core::oracle::{dominance_sweep, maximize, OracleConfig};
use qcb_core::{io, random, ChannelClass, TwoQubitState};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::input;
use crate::output::{Report, Table};

pub fn bound(tau: &TwoQubitState) -> Result<Report> {
    let dominance = bound_dominance_check(tau)?;
    let mut table = Table::new(&["class", "value", "exact"]);
    for r in &dominance.reports {
        table.push(vec![r.class.tag().into(), r.value.into(), r.exact.into()]);
    }
    let mut report = Report::new(table);
    report.json = Some(json!({
        "tau": io::two_qubit_state_to_json(tau),
        "bounds": report.table.to_json(),
    }));
    Ok(report)
}

pub fn fef_report(tau: &TwoQubitState) -> Report {
    let mut table = Table::new(&["fef"]);
    table.push(vec![fef(tau).into()]);
    Report::new(table)
}

pub fn prob(ppovm: &str, channel: &str, class: Option<ChannelClass>) -> Result<Report> {
    let ppovm = input::ppovm(ppovm)?;
    let channel = input::channel(channel)?;
    let mut headers = vec!["label", "probability"];
    if class.is_some() {
        headers.push("bound");
    }
    let mut table = Table::new(&headers);
    for (m, label) in ppovm.labels().iter().enumerate() {
        let effect = ppovm.effect(m);
        let mut row = vec![label.as_str().into(), channel_probability(&effect, &channel).into()];
        if let Some(class) = class {
            row.push(bound_probability(&effect, class)?.into());
        }
        table.push(row);
    }
    Ok(Report::new(table))
}

pub fn convert(inst: &ConversionInstance, achiever: Option<ChannelClass>) -> Result<Report> {
    let report = convertibility_report(inst);
    let mut table = Table::new(&["class", "value", "exact", "verdict"]);
    for c in &report.classes {
        table.push(vec![c.class.tag().into(), c.value.into(), c.exact.into(), c.verdict.to_string().into()]);
    }
    let mut out = Report::new(table);
    let mut doc = serde_json::to_value(&report)?;
    if let Some(class) = achiever {
        let channel = build_achiever(inst, class)?;
        let channel_json = io::channel_to_json(&channel);
        out.notes.push(format!("achiever ({class}): {channel_json}"));
        doc["achiever"] = channel_json;
    }
    out.json = Some(doc);
    Ok(out)
}

pub fn parse_family(spec: &str) -> Result<Family> {
    let Some((name, value)) = spec.split_once('=') else {
        bail!("expected x=<value> or y=<value>, got {spec:?}");
    };
    let v = input::number(value)?;
    match name.trim() {
        "x" => Ok(Family::FixedX(v)),
        "y" => Ok(Family::FixedY(v)),
        other => bail!("family must fix x or y, got {other:?}"),
    }
}

pub fn compare(pair: &str, family: &str, grid: usize) -> Result<Report> {
    let (a, b) = input::class_pair(pair)?;
    let family = parse_family(family)?;
    let report = compare_classes(family, a, b, grid)?;
    let mut table = Table::new(&["parameter", "diff", "sign"]);
    for s in &report.samples {
        table.push(vec![s.param.into(), s.diff.into(), s.sign.to_string().into()]);
    }
    let mut out = Report::new(table);
    let crossings: Vec<String> = report.crossings.iter().map(|c| format!("{c:?}")).collect();
    out.notes.push(format!("zeros of {a} - {b}: [{}]", crossings.join(", ")));
    out.json = Some(serde_json::to_value(&report)?);
    Ok(out)
}

fn summary(verdicts: &[(Scheme, DetectionVerdict)]) -> String {
    let all = |v: DetectionVerdict| verdicts.iter().all(|(_, x)| *x == v);
    let phrase = |v: DetectionVerdict| match v {
        DetectionVerdict::NotEntanglementBreaking => "not entanglement breaking",
        DetectionVerdict::Inconclusive => "inconclusive",
    };
    if verdicts.len() > 1 && all(verdicts[0].1) {
        return format!("{} (both schemes)", phrase(verdicts[0].1));
    }
    let parts: Vec<String> = verdicts.iter().map(|(s, v)| format!("{} ({s})", phrase(*v))).collect();
    parts.join("; ")
}

pub fn detect(w: f64, schemes: &[Scheme], shots: Option<u64>, seed: u64, z: f64) -> Result<Report> {
    let mut verdicts = Vec::new();
    let mut out = match shots {
        None => {
            let mut table = Table::new(&["scheme", "w", "probability", "bound", "verdict"]);
            for &scheme in schemes {
                let d = detect_not_eb(w, scheme)?;
                verdicts.push((scheme, d.verdict));
                table.push(vec![
                    scheme.to_string().into(),
                    w.into(),
                    d.probability.into(),
                    d.bound.into(),
                    d.verdict.to_string().into(),
                ]);
            }
            Report::new(table)
        }
        Some(shots) => {
            let mut table =
                Table::new(&["scheme", "w", "shots", "successes", "estimate", "lower", "upper", "bound", "verdict"]);
            for (k, &scheme) in schemes.iter().enumerate() {
                let d = sampled_detection(w, scheme, shots, seed.wrapping_add(k as u64), z)?;
                verdicts.push((scheme, d.verdict));
                table.push(vec![
                    scheme.to_string().into(),
                    w.into(),
                    d.shots.into(),
                    d.successes.into(),
                    d.estimate.into(),
                    d.interval.0.into(),
                    d.interval.1.into(),
                    d.bound.into(),
                    d.verdict.to_string().into(),
                ]);
            }
            Report::new(table)
        }
    };
    out.notes.push(summary(&verdicts));
    Ok(out)
}

pub fn sweep(n: usize) -> Result<Report> {
    let rows = threshold_sweep(&uniform_grid(n))?;
    let mut table = Table::new(&[
        "w",
        "p_entangled",
        "p_ancilla_free",
        "bound_entangled",
        "bound_ancilla_free",
        "verdict_entangled",
        "verdict_ancilla_free",
    ]);
    for r in &rows {
        table.push(vec![
            r.w.into(),
            r.p_entangled.into(),
            r.p_ancilla_free.into(),
            r.bound_entangled.into(),
            r.bound_ancilla_free.into(),
            r.verdict_entangled.to_string().into(),
            r.verdict_ancilla_free.to_string().into(),
        ]);
    }
    let mut out = Report::new(table);
    for scheme in Scheme::ALL {
        let t = detected_threshold(&rows, scheme).map_or("none".to_string(), |w| format!("{w:?}"));
        out.notes.push(format!("first not-eb grid point ({scheme}): {t}"));
    }
    out.csv = Some(sweep_csv(&rows));
    Ok(out)
}

pub struct OracleArgs {
    pub starts: Option<usize>,
    pub refine: Option<usize>,
    pub iters: Option<usize>,
    pub seed: u64,
}

impl OracleArgs {
    fn config(&self, class: ChannelClass) -> OracleConfig {
        let mut cfg = OracleConfig::new(class).with_seed(self.seed);
        if let Some(n) = self.starts {
            cfg.n_starts = n;
        }
        if let Some(n) = self.refine {
            cfg.n_refine = n;
        }
        if let Some(n) = self.iters {
            cfg.refine_iters = n;
        }
        cfg
    }
}

pub fn oracle(tau: &TwoQubitState, classes: &[ChannelClass], args: &OracleArgs) -> Result<Report> {
    let mut table = Table::new(&["class", "best_value", "bound", "gap", "exact", "evaluations"]);
    let mut witnesses = Vec::new();
    for &class in classes {
        let found = maximize(tau, &args.config(class))?;
        let b = bound_for(class, tau);
        table.push(vec![
            class.tag().into(),
            found.best_value.into(),
            b.value.into(),
            (b.value - found.best_value).into(),
            b.exact.into(),
            found.evaluations.into(),
        ]);
        witnesses.push(io::channel_to_json(&found.witness));
    }
    let mut out = Report::new(table);
    let mut rows = out.table.to_json();
    for (row, w) in rows.as_array_mut().expect("rows").iter_mut().zip(witnesses) {
        row["witness"] = w;
    }
    out.json = Some(json!({"seed": args.seed, "results": rows}));
    Ok(out)
}

pub struct VerifyArgs {
    pub n_tau: usize,
    pub n_channels: usize,
    pub gap_samples: usize,
    pub oracle: OracleArgs,
}

/// Soundness sweeps per class; the flag is `false` when any bound is exceeded.
pub fn verify(classes: &[ChannelClass], args: &VerifyArgs) -> Result<(Report, bool)> {
    let mut table = Table::new(&[
        "class",
        "n_tau",
        "n_channels",
        "max_excess",
        "violations",
        "gap_samples",
        "min_gap",
        "max_gap",
    ]);
    let mut ok = true;
    for (k, &class) in classes.iter().enumerate() {
        let seed = args.oracle.seed.wrapping_add(k as u64);
        let sweep = dominance_sweep(class, args.n_tau, args.n_channels, seed);
        ok &= sweep.violations == 0;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut gaps = Vec::with_capacity(args.gap_samples);
        for _ in 0..args.gap_samples {
            let tau = random::two_qubit_state(&mut rng);
            let found = maximize(&tau, &args.oracle.config(class))?;
            let gap = bound_for(class, &tau).value - found.best_value;
            ok &= gap >= -qcb_core::oracle::SOUNDNESS_TOL;
            gaps.push(gap);
        }
        let stat = |f: fn(f64, f64) -> f64| gaps.iter().copied().reduce(f).map_or(f64::NAN, |v| v);
        table.push(vec![
            class.tag().into(),
            sweep.n_tau.into(),
            sweep.n_channels.into(),
            sweep.max_excess.unwrap_or(f64::NAN).into(),
            sweep.violations.into(),
            args.gap_samples.into(),
            stat(f64::min).into(),
            stat(f64::max).into(),
        ]);
    }
    let mut out = Report::new(table);
    out.notes.push(if ok { "all bounds hold".into() } else { "BOUND VIOLATION".into() });
    Ok((out, ok))
}
