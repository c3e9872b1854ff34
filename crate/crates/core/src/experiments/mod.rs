//! Monte Carlo experiments: energy coefficients, ESD convergence, table
//! reproduction and Ky Fan sweeps, each producing a [`RunRecord`].
//!
//! Trial `i` of a run always uses `Seed(config.seed).for_trial(i)`, so a record
//! does not depend on scheduling or thread count.

mod record;

use std::time::Instant;

use rand::Rng;

use crate::error::{check_probability, Error, Result};
use crate::exec::Execution;
use crate::graphs::{self, PartSizes, PartitionSpec, Seed};
use crate::laws::{self, SemicircleLaw};
use crate::matrix::SymMatrix;
use crate::spectra;

pub use record::{
    load_record, save_record, table_csv, Aggregate, CheckOutcome, ExperimentConfig, ExperimentKind,
    KyFanSummary, LadderPoint, RunRecord, TableRow, Theory, TrialFailure, TrialStat,
    ARTIFACT_VERSION,
};

/// Default relative tolerance on mean energy coefficients.
pub const DEFAULT_COEFF_TOL: f64 = 0.05;
/// Default relative tolerance for the vanishing-parts schedule.
pub const DEFAULT_VANISHING_TOL: f64 = 0.06;
/// Default bound on the final KS distance of a convergence ladder.
pub const DEFAULT_KS_TOL: f64 = 0.05;
/// Default floor for Ky Fan gaps relative to `||X||_F + ||Y||_F`.
pub const DEFAULT_KYFAN_TOL: f64 = 1e-8;
/// Relative slack applied to the unbalanced-parts bracket.
pub const BRACKET_SLACK: f64 = 0.05;
/// Absolute slack on energy bracketing between a matrix and its centering.
pub const ENERGY_BRACKET_EPS: f64 = 1e-6;

pub const DEFAULT_LADDER: [usize; 4] = [250, 500, 1000, 2000];

/// Checks that `config` has the parameters its kind needs.
pub fn validate(config: &ExperimentConfig) -> Result<()> {
    use ExperimentKind::*;
    check_probability(config.p)?;
    if config.trials == 0 {
        return Err(Error::Parameter("trials must be at least 1".into()));
    }
    if let Some(t) = config.tolerance {
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::Parameter(format!("tolerance {t} must be positive")));
        }
    }
    match config.kind {
        Er | Multipartite | Bipartite if config.n < 4 => {
            return Err(Error::Parameter(format!("n = {} is below 4", config.n)));
        }
        _ => {}
    }
    match config.kind {
        Multipartite => {
            multipartite_spec(config)?;
        }
        Bipartite => {
            bipartite_fractions(config)?;
        }
        Convergence => {
            let ladder = ladder(config);
            if ladder.len() < 2 || ladder.iter().any(|&n| n < 4) {
                return Err(Error::Parameter(
                    "convergence ladder needs at least two sizes, each >= 4".into(),
                ));
            }
            convergence_law(config, ladder[0])?;
        }
        Table => {
            if config.p <= 0.0 || config.p >= 1.0 {
                return Err(Error::DegenerateLaw(format!(
                    "table needs 0 < p < 1, got {}",
                    config.p
                )));
            }
            if table_ys(config)
                .iter()
                .any(|y| !(y.is_finite() && *y > 0.0))
            {
                return Err(Error::Parameter("table ratios must be positive".into()));
            }
        }
        Kyfan => {
            if config.count == Some(0) || config.max_n == Some(0) {
                return Err(Error::Parameter(
                    "kyfan count and max_n must be positive".into(),
                ));
            }
        }
        Er => {}
    }
    Ok(())
}

/// Runs the experiment described by `config` with the default scheduler.
pub fn run(config: &ExperimentConfig) -> Result<RunRecord> {
    run_with(config, Execution::default())
}

pub fn run_with(config: &ExperimentConfig, exec: Execution) -> Result<RunRecord> {
    match config.kind {
        ExperimentKind::Er => run_er(config, exec),
        ExperimentKind::Multipartite => run_multipartite(config, exec),
        ExperimentKind::Bipartite => run_bipartite(config, exec),
        ExperimentKind::Convergence => convergence_study(config, exec),
        ExperimentKind::Table => {
            validate(config)?;
            let mut record = RunRecord::new(config.clone());
            record.table = reproduce_table(config.p, &table_ys(config))?;
            for row in record.table.clone() {
                let (a, b) = laws::fractions_for_ratio(row.y)?;
                let (lo, hi) = laws::unbalanced_bounds(&[a, b], config.p)?;
                record.check(
                    &format!("bracket y={}", row.y),
                    lo > 0.0 && lo <= row.theory_coeff && row.theory_coeff <= hi,
                    format!("{lo} <= {} <= {hi}", row.theory_coeff),
                );
            }
            record.passed = record.all_checks_pass();
            Ok(record)
        }
        ExperimentKind::Kyfan => kyfan_suite(config, exec),
    }
}

fn require_kind(config: &ExperimentConfig, kind: ExperimentKind) -> Result<()> {
    if config.kind == kind {
        Ok(())
    } else {
        Err(Error::Parameter(format!(
            "expected a {kind:?} config, got {:?}",
            config.kind
        )))
    }
}

/// Part fractions of a multipartite run: explicit `parts`, `m` equal parts,
/// or `floor(sqrt n)` equal parts for the vanishing-parts schedule.
pub fn multipartite_spec(config: &ExperimentConfig) -> Result<PartitionSpec> {
    if let Some(parts) = &config.parts {
        return Ok(parts.clone());
    }
    if let Some(m) = config.m {
        return PartitionSpec::equal(m);
    }
    if config.vanishing_parts {
        return PartitionSpec::equal((config.n as f64).sqrt().floor() as usize);
    }
    Err(Error::Parameter(
        "multipartite run needs parts, m, or vanishing_parts".into(),
    ))
}

/// `(nu1, nu2)` from explicit two-part `parts` or from the ratio `y`.
pub fn bipartite_fractions(config: &ExperimentConfig) -> Result<(f64, f64)> {
    match (&config.parts, config.y) {
        (Some(parts), _) if parts.part_count() == 2 => {
            Ok((parts.fractions()[0], parts.fractions()[1]))
        }
        (Some(parts), _) => Err(Error::InvalidPartition(format!(
            "bipartite run needs 2 parts, got {}",
            parts.part_count()
        ))),
        (None, Some(y)) => laws::fractions_for_ratio(y),
        (None, None) => Err(Error::Parameter("bipartite run needs parts or y".into())),
    }
}

fn ladder(config: &ExperimentConfig) -> Vec<usize> {
    config
        .n_list
        .clone()
        .unwrap_or_else(|| DEFAULT_LADDER.to_vec())
}

fn table_ys(config: &ExperimentConfig) -> Vec<f64> {
    config
        .y_list
        .clone()
        .unwrap_or_else(|| (1..=10).map(f64::from).collect())
}

/// Which random graph a trial samples.
#[derive(Clone, Debug)]
enum Family {
    Er,
    Multipartite(PartitionSpec),
}

struct TrialPlan<'a> {
    family: &'a Family,
    p: f64,
    centered: bool,
    /// Law of the scaled centered spectrum, for the KS distance.
    law: Option<SemicircleLaw>,
}

struct TrialOutput {
    stat: TrialStat,
    parts: PartSizes,
}

fn run_trial(plan: &TrialPlan<'_>, trial: usize, n: usize, seed: Seed) -> Result<TrialOutput> {
    let start = Instant::now();
    let (a, parts) = match plan.family {
        Family::Er => (
            graphs::sample_er(n, plan.p, seed)?,
            PartSizes::singletons(n),
        ),
        Family::Multipartite(spec) => graphs::sample_multipartite(n, spec, plan.p, seed)?,
    };
    let energy = spectra::energy(&a)?;
    let (centered_energy, ks) = if plan.centered {
        let c = graphs::center(&a, plan.p, &parts)?;
        let s = spectra::eigenvalues_sym(&c)?;
        let ks = plan.law.map(|law| {
            let scaled = s.scaled(1.0 / (n as f64).sqrt());
            scaled.ks_distance(|x| law.cdf(x))
        });
        (Some(s.energy()), ks)
    } else {
        (None, None)
    };
    Ok(TrialOutput {
        stat: TrialStat {
            trial,
            n,
            seed: seed.0,
            energy,
            coefficient: energy / (n as f64).powf(1.5),
            centered_energy,
            ks,
            seconds: start.elapsed().as_secs_f64(),
        },
        parts,
    })
}

fn run_trials(
    config: &ExperimentConfig,
    plan: &TrialPlan<'_>,
    exec: Execution,
    record: &mut RunRecord,
) -> Option<PartSizes> {
    let base = Seed(config.seed);
    let n = config.n;
    let outcomes = exec.map((0..config.trials).collect(), |i| {
        (i, run_trial(plan, i, n, base.for_trial(i as u64)))
    });
    let mut parts = None;
    for (i, outcome) in outcomes {
        match outcome {
            Ok(out) => {
                record.trials.push(out.stat);
                parts.get_or_insert(out.parts);
            }
            Err(e) => record.failures.push(TrialFailure {
                trial: i,
                message: e.to_string(),
            }),
        }
    }
    record.trials.sort_by_key(|t| t.trial);
    record.aggregate = Aggregate::of(
        &record
            .trials
            .iter()
            .map(|t| t.coefficient)
            .collect::<Vec<_>>(),
    );
    parts
}

fn relative_error(mean: f64, theory: f64) -> f64 {
    if theory == 0.0 {
        if mean == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (mean - theory).abs() / theory
    }
}

/// Records the tolerance check of the mean coefficient against `theory`.
fn compare_mean(record: &mut RunRecord, theory: f64, tol: f64) {
    if let Some(agg) = &record.aggregate {
        let rel = relative_error(agg.mean, theory);
        record.relative_error = Some(rel);
        record.check(
            "mean coefficient",
            rel <= tol,
            format!(
                "mean {} vs theory {theory}: relative error {rel:.4} (tol {tol})",
                agg.mean
            ),
        );
    } else {
        record.check("mean coefficient", false, "no successful trials".into());
    }
}

/// Per-trial `|E(A) - E(centered A)| <= bound`.
fn check_energy_bracket(record: &mut RunRecord, bound: f64) {
    let worst = record
        .trials
        .iter()
        .filter_map(|t| t.centered_energy.map(|c| (t.energy - c).abs()))
        .fold(None, |acc: Option<f64>, d| {
            Some(acc.map_or(d, |a| a.max(d)))
        });
    if let Some(worst) = worst {
        record.check(
            "energy bracket",
            worst <= bound + ENERGY_BRACKET_EPS,
            format!("max |E(A) - E(centered)| = {worst} <= {bound}"),
        );
    }
}

fn sigma_for(p: f64) -> Option<SemicircleLaw> {
    SemicircleLaw::for_adjacency(p).ok()
}

/// Energy coefficient of `G_n(p)` against `(8 / 3 pi) sqrt(p (1 - p))`.
pub fn run_er(config: &ExperimentConfig, exec: Execution) -> Result<RunRecord> {
    require_kind(config, ExperimentKind::Er)?;
    validate(config)?;
    let p = config.p;
    let family = Family::Er;
    let plan = TrialPlan {
        family: &family,
        p,
        centered: config.centered,
        law: sigma_for(p),
    };
    let mut record = RunRecord::new(config.clone());
    run_trials(config, &plan, exec, &mut record);
    let theory = laws::er_energy_coeff(p)?;
    record.theory = Some(Theory {
        formula: "er_energy_coeff".into(),
        value: Some(theory),
        lower: None,
        upper: None,
    });
    compare_mean(
        &mut record,
        theory,
        config.tolerance.unwrap_or(DEFAULT_COEFF_TOL),
    );
    check_energy_bracket(&mut record, 2.0 * p * (config.n as f64 - 1.0));
    record.passed = record.all_checks_pass();
    Ok(record)
}

/// Energy of `p (J_n - I_{n,m})`, the complete multipartite graph scaled by
/// `p`. Its nonzero eigenvalues are those of the `m x m` matrix with entries
/// `sqrt(n_i n_j)` off the diagonal.
pub fn mean_matrix_energy(parts: &PartSizes, p: f64) -> Result<f64> {
    let sizes = parts.sizes();
    let quotient = SymMatrix::from_upper_fn(sizes.len(), |i, j| {
        if i == j {
            0.0
        } else {
            (sizes[i] as f64 * sizes[j] as f64).sqrt()
        }
    });
    Ok(p * spectra::energy(&quotient)?)
}

/// Energy coefficient of a random multipartite graph. Balanced partitions are
/// compared with the balanced law, the vanishing-parts schedule with the
/// Erdős–Rényi law, and unbalanced partitions with the bracket from
/// [`laws::unbalanced_bounds`].
pub fn run_multipartite(config: &ExperimentConfig, exec: Execution) -> Result<RunRecord> {
    require_kind(config, ExperimentKind::Multipartite)?;
    validate(config)?;
    let p = config.p;
    let spec = multipartite_spec(config)?;
    let m = spec.part_count();
    let balanced = spec.is_balanced();
    let law = if balanced && p > 0.0 && p < 1.0 {
        Some(SemicircleLaw::multipartite(0.0, (p * (1.0 - p)).sqrt(), m)?)
    } else {
        None
    };
    let family = Family::Multipartite(spec.clone());
    let plan = TrialPlan {
        family: &family,
        p,
        centered: config.centered,
        law,
    };
    let mut record = RunRecord::new(config.clone());
    let parts = run_trials(config, &plan, exec, &mut record);

    if config.vanishing_parts && config.parts.is_none() && config.m.is_none() {
        let theory = laws::vanishing_parts_coeff(p)?;
        record.theory = Some(Theory {
            formula: "vanishing_parts_coeff".into(),
            value: Some(theory),
            lower: None,
            upper: None,
        });
        compare_mean(
            &mut record,
            theory,
            config.tolerance.unwrap_or(DEFAULT_VANISHING_TOL),
        );
    } else if balanced {
        let theory = laws::balanced_multipartite_coeff(p, m)?;
        record.theory = Some(Theory {
            formula: "balanced_multipartite_coeff".into(),
            value: Some(theory),
            lower: None,
            upper: None,
        });
        compare_mean(
            &mut record,
            theory,
            config.tolerance.unwrap_or(DEFAULT_COEFF_TOL),
        );
    } else {
        let (lo, hi) = laws::unbalanced_bounds(spec.fractions(), p)?;
        record.theory = Some(Theory {
            formula: "unbalanced_bounds".into(),
            value: None,
            lower: Some(lo),
            upper: Some(hi),
        });
        check_bracket(&mut record, lo, hi);
    }

    if let Some(parts) = parts {
        let mean_energy = mean_matrix_energy(&parts, p)?;
        let n = parts.total() as f64;
        let within: f64 = parts.sizes().iter().map(|&s| s as f64 - 1.0).sum();
        let split_bound = 2.0 * p * (n - 1.0) + p * within;
        record.check(
            "mean matrix energy",
            mean_energy <= split_bound + ENERGY_BRACKET_EPS,
            format!("E(p(J - I_nm)) = {mean_energy} <= {split_bound}"),
        );
        check_energy_bracket(&mut record, mean_energy);
    }
    record.passed = record.all_checks_pass();
    Ok(record)
}

fn check_bracket(record: &mut RunRecord, lo: f64, hi: f64) {
    let mean = record.aggregate.as_ref().map(|a| a.mean);
    let (low, high) = (lo * (1.0 - BRACKET_SLACK), hi * (1.0 + BRACKET_SLACK));
    record.check(
        "unbalanced bracket",
        mean.is_some_and(|m| low <= m && m <= high),
        format!("{low} <= {mean:?} <= {high}"),
    );
}

/// Energy coefficient of a random bipartite graph against
/// `2 nu2 sqrt(nu1) Lambda`, plus the unbalanced-parts bracket.
pub fn run_bipartite(config: &ExperimentConfig, exec: Execution) -> Result<RunRecord> {
    require_kind(config, ExperimentKind::Bipartite)?;
    validate(config)?;
    let p = config.p;
    let (nu1, nu2) = bipartite_fractions(config)?;
    let spec = PartitionSpec::new(vec![nu1, nu2])?;
    let law = if spec.is_balanced() && p > 0.0 && p < 1.0 {
        Some(SemicircleLaw::multipartite(0.0, (p * (1.0 - p)).sqrt(), 2)?)
    } else {
        None
    };
    let family = Family::Multipartite(spec);
    let plan = TrialPlan {
        family: &family,
        p,
        centered: config.centered,
        law,
    };
    let mut record = RunRecord::new(config.clone());
    let parts = run_trials(config, &plan, exec, &mut record);

    let theory = laws::bipartite_coeff(nu1, nu2, p)?;
    let (lo, hi) = laws::unbalanced_bounds(&[nu1, nu2], p)?;
    record.theory = Some(Theory {
        formula: "bipartite_coeff".into(),
        value: Some(theory),
        lower: Some(lo),
        upper: Some(hi),
    });
    compare_mean(
        &mut record,
        theory,
        config.tolerance.unwrap_or(DEFAULT_COEFF_TOL),
    );
    check_bracket(&mut record, lo, hi);
    if let Some(parts) = parts {
        check_energy_bracket(&mut record, mean_matrix_energy(&parts, p)?);
    }
    record.passed = record.all_checks_pass();
    Ok(record)
}

/// Deterministic table of `(y, bipartite coefficient, lower bound)`.
pub fn reproduce_table(p: f64, ys: &[f64]) -> Result<Vec<TableRow>> {
    ys.iter()
        .map(|&y| {
            let (nu1, nu2) = laws::fractions_for_ratio(y)?;
            Ok(TableRow {
                y,
                theory_coeff: laws::bipartite_coeff(nu1, nu2, p)?,
                lower_bound: laws::unbalanced_bounds(&[nu1, nu2], p)?.0,
            })
        })
        .collect()
}

fn convergence_law(config: &ExperimentConfig, n: usize) -> Result<(Family, SemicircleLaw)> {
    let p = config.p;
    if p <= 0.0 || p >= 1.0 {
        return Err(Error::DegenerateLaw(format!(
            "convergence needs 0 < p < 1, got {p}"
        )));
    }
    let sigma2 = (p * (1.0 - p)).sqrt();
    if config.parts.is_none() && config.m.is_none() && !config.vanishing_parts {
        return Ok((Family::Er, SemicircleLaw::new(sigma2)?));
    }
    let spec = multipartite_spec(&ExperimentConfig {
        n,
        ..config.clone()
    })?;
    if !spec.is_balanced() {
        return Err(Error::Parameter(
            "convergence study needs a balanced partition".into(),
        ));
    }
    let m = spec.part_count();
    Ok((
        Family::Multipartite(spec),
        SemicircleLaw::multipartite(0.0, sigma2, m)?,
    ))
}

/// Mean KS distance between the scaled centered spectrum and its limit law
/// along a ladder of sizes.
///
/// Passes when the final distance is below tolerance and below the first,
/// and the sequence has at most one inversion.
pub fn convergence_study(config: &ExperimentConfig, exec: Execution) -> Result<RunRecord> {
    require_kind(config, ExperimentKind::Convergence)?;
    validate(config)?;
    let sizes = ladder(config);
    let mut jobs = Vec::new();
    for &n in &sizes {
        for t in 0..config.trials {
            jobs.push((jobs.len(), n, t));
        }
    }
    let base = Seed(config.seed);
    let outcomes = exec.map(jobs, |(index, n, _)| {
        let result = convergence_law(config, n).and_then(|(family, law)| {
            let plan = TrialPlan {
                family: &family,
                p: config.p,
                centered: true,
                law: Some(law),
            };
            run_trial(&plan, index, n, base.for_trial(index as u64))
        });
        (index, result)
    });
    let mut record = RunRecord::new(config.clone());
    for (index, outcome) in outcomes {
        match outcome {
            Ok(out) => record.trials.push(out.stat),
            Err(e) => record.failures.push(TrialFailure {
                trial: index,
                message: e.to_string(),
            }),
        }
    }
    record.trials.sort_by_key(|t| t.trial);
    for &n in &sizes {
        let ks: Vec<f64> = record
            .trials
            .iter()
            .filter(|t| t.n == n)
            .filter_map(|t| t.ks)
            .collect();
        if ks.is_empty() {
            continue;
        }
        let mean_ks = ks.iter().sum::<f64>() / ks.len() as f64;
        record.ladder.push(LadderPoint { n, mean_ks, ks });
    }

    let tol = config.tolerance.unwrap_or(DEFAULT_KS_TOL);
    let means: Vec<f64> = record.ladder.iter().map(|l| l.mean_ks).collect();
    match (means.first(), means.last()) {
        (Some(&first), Some(&last)) if means.len() == sizes.len() => {
            record.check(
                "final ks",
                last < tol,
                format!("ks at n={} is {last} (tol {tol})", sizes[sizes.len() - 1]),
            );
            record.check(
                "first exceeds last",
                first > last,
                format!("{first} > {last}"),
            );
            let inversions = means.windows(2).filter(|w| w[1] >= w[0]).count();
            record.check(
                "monotone ladder",
                inversions <= 1,
                format!("{inversions} inversions in {means:?}"),
            );
        }
        _ => record.check("ladder complete", false, "missing ladder points".into()),
    }
    record.passed = record.all_checks_pass();
    Ok(record)
}

/// Ky Fan gaps `E(X) + E(Y) - E(X + Y)` over random symmetric pairs with
/// entries uniform on `[-1, 1]` and orders up to `max_n`.
pub fn kyfan_suite(config: &ExperimentConfig, exec: Execution) -> Result<RunRecord> {
    require_kind(config, ExperimentKind::Kyfan)?;
    validate(config)?;
    let count = config.count.unwrap_or(500);
    let max_n = config.max_n.unwrap_or(12);
    let base = Seed(config.seed);
    let gaps = exec.map((0..count).collect(), |i| {
        let mut rng = base.for_trial(i as u64).rng();
        let n = rng.random_range(1..=max_n);
        let x = SymMatrix::from_upper_fn(n, |_, _| rng.random_range(-1.0..=1.0));
        let y = SymMatrix::from_upper_fn(n, |_, _| rng.random_range(-1.0..=1.0));
        let scale = x.frobenius_norm() + y.frobenius_norm();
        spectra::kyfan_gap(&x, &y).map(|g| (g, if scale > 0.0 { g / scale } else { g }))
    });
    let mut record = RunRecord::new(config.clone());
    let mut ok = Vec::with_capacity(count);
    for (i, g) in gaps.into_iter().enumerate() {
        match g {
            Ok(v) => ok.push(v),
            Err(e) => record.failures.push(TrialFailure {
                trial: i,
                message: e.to_string(),
            }),
        }
    }
    let tol = config.tolerance.unwrap_or(DEFAULT_KYFAN_TOL);
    if !ok.is_empty() {
        let min_gap = ok.iter().map(|g| g.0).fold(f64::INFINITY, f64::min);
        let min_relative_gap = ok.iter().map(|g| g.1).fold(f64::INFINITY, f64::min);
        let mean_gap = ok.iter().map(|g| g.0).sum::<f64>() / ok.len() as f64;
        record.kyfan = Some(KyFanSummary {
            pairs: ok.len(),
            min_gap,
            mean_gap,
            min_relative_gap,
        });
        record.check(
            "kyfan gap",
            min_relative_gap >= -tol,
            format!("min relative gap {min_relative_gap:e} >= -{tol:e}"),
        );
    }
    record.passed = record.all_checks_pass();
    Ok(record)
}
