//! Desk-scale experiment harness: the two summary tables over the traffic
//! game, weight-plane heatmaps, and a runtime scaling study.

use crate::design::{order_and_design, DesignConfig, OadResult};
use crate::entropy::{
    gradient_descent, social_cost_gradient, solve, EntropyNashConfig, GdConfig, GdResult,
    SolveReport,
};
use crate::game::{
    enumerate_pure_nash, expected_social_cost, is_pure_nash, social_cost, MixedProfile,
    PureProfile, SocialCost, StaticGame,
};
use crate::relationship::{modify_costs, NetworkSet, RelationshipType};
use crate::scenarios::{default_traffic_game, symmetric_traffic_mixed_nash, CarpoolTotal};
use crate::{Error, Result};
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::Serialize;
use std::time::Instant;

/// Budget schedule for the exact designer in the player-count table.
pub fn table1_budget(n: usize) -> f64 {
    if n <= 4 {
        1.0
    } else {
        2.0
    }
}

/// (λ, γ) schedule for the gradient designer in the player-count table.
pub fn table1_gd_params(n: usize) -> (f64, f64) {
    match n {
        0..=3 => (0.3, 1.0),
        4 => (0.6, 0.3),
        _ => (0.9, 0.1),
    }
}

fn gd_config(n: usize) -> GdConfig {
    let (lambda, gamma) = table1_gd_params(n);
    GdConfig {
        gamma,
        entropy: EntropyNashConfig { lambda, ..Default::default() },
        ..Default::default()
    }
}

/// Per-player strategy with the highest probability, ties to the lower
/// index.
pub fn rounded_profile(x: &MixedProfile) -> PureProfile {
    PureProfile::from_zero_based(
        x.distributions()
            .iter()
            .map(|d| {
                d.iter()
                    .enumerate()
                    .max_by(|a, b| a.1.partial_cmp(b.1).unwrap().then(b.0.cmp(&a.0)))
                    .unwrap()
                    .0
            })
            .collect(),
    )
}

/// How a gradient-descent run is scored: by the certified pure Nash it
/// induces when the rounded equilibrium is one, otherwise by the expected
/// social cost of the mixed equilibrium itself.
#[derive(Debug, Clone, Serialize)]
pub struct GdOutcome {
    pub cost: f64,
    /// 1-based.
    pub profile: Vec<usize>,
    /// True when `profile` is a pure Nash of the modified game.
    pub certified_pure: bool,
}

pub fn gd_outcome(
    g: &StaticGame,
    v: &SocialCost,
    phi: &NetworkSet,
    res: &GdResult,
) -> Result<GdOutcome> {
    let rounded = rounded_profile(&res.equilibrium.profile);
    let modified = modify_costs(g, phi, &res.w)?;
    if is_pure_nash(&modified, &rounded)? {
        Ok(GdOutcome {
            cost: social_cost(g, v, &rounded)?,
            profile: rounded.one_based(),
            certified_pure: true,
        })
    } else {
        Ok(GdOutcome {
            cost: expected_social_cost(g, v, &res.equilibrium.profile)?,
            profile: rounded.one_based(),
            certified_pure: false,
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Table1Row {
    pub n: usize,
    /// Minimum of the social cost over pure profiles.
    pub optimum: f64,
    /// Social cost at the undesigned equilibrium.
    pub baseline_cost: f64,
    /// "pure" or "mixed".
    pub baseline_kind: String,
    pub oad_norm: f64,
    pub oad_cost: f64,
    pub oad_profile: Vec<usize>,
    pub gd_norm: f64,
    pub gd_cost: f64,
    pub gd_steps: usize,
    pub gd_certified_pure: bool,
}

/// Baseline equilibrium cost of the undesigned two-route traffic game.
///
/// For three players the pure equilibria coexist with the symmetric mixed
/// one and the mixed point is the reported baseline; every other size uses
/// the cheapest pure Nash.
pub fn traffic_baseline(g: &StaticGame, v: &SocialCost, n: usize) -> Result<(f64, String)> {
    if n == 3 {
        let x = symmetric_traffic_mixed_nash(n, CarpoolTotal::TableConsistent, 1.5)?;
        return Ok((expected_social_cost(g, v, &x)?, "mixed".into()));
    }
    let nash = enumerate_pure_nash(g)?;
    let best = nash
        .iter()
        .map(|p| social_cost(g, v, p))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    if best.is_finite() {
        Ok((best, "pure".into()))
    } else {
        Err(Error::InvalidArgument(format!("traffic game with n = {n} has no pure Nash")))
    }
}

fn l1(w: &[f64]) -> f64 {
    w.iter().map(|v| v.abs()).sum()
}

/// One row of the player-count table for the two-route traffic game, with
/// individual relationship networks.
pub fn table1_row(n: usize) -> Result<Table1Row> {
    let g = default_traffic_game(n)?;
    let v = SocialCost::SumOfPlayerCosts;
    let phi = NetworkSet::individual(n)?;
    let (_, optimum) = crate::game::best_social_profile(&g, &v)?;
    let (baseline_cost, baseline_kind) = traffic_baseline(&g, &v, n)?;

    let oad = order_and_design(&g, &v, &phi, &DesignConfig::with_budget(table1_budget(n)))?
        .ok_or_else(|| {
            Error::InvalidArgument(format!("exact design found no profile for n = {n}"))
        })?;

    let gd = gradient_descent(&g, &v, &phi, &gd_config(n))?;
    let outcome = gd_outcome(&g, &v, &phi, &gd)?;

    Ok(Table1Row {
        n,
        optimum,
        baseline_cost,
        baseline_kind,
        oad_norm: l1(&oad.w),
        oad_cost: oad.social_cost,
        oad_profile: oad.target_profile,
        gd_norm: l1(&gd.w),
        gd_cost: outcome.cost,
        gd_steps: gd.steps,
        gd_certified_pure: outcome.certified_pure,
    })
}

/// Player-count sweep, n = 2..=5.
pub fn table1() -> Result<Vec<Table1Row>> {
    (2..=5).map(table1_row).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct Table2Row {
    pub relationship: String,
    pub num_weights: usize,
    pub lp_constraints: usize,
    pub oad_norm: f64,
    pub oad_cost: f64,
    pub gd_norm: f64,
    pub gd_cost: f64,
    pub gd_steps: usize,
}

/// Relationship-type comparison on the three-player traffic game.
pub fn table2() -> Result<Vec<Table2Row>> {
    let n = 3;
    let g = default_traffic_game(n)?;
    let v = SocialCost::SumOfPlayerCosts;
    let target = PureProfile::from_one_based(&vec![1; n])?;
    let cfg = DesignConfig::with_budget(table1_budget(n));
    [RelationshipType::Individual, RelationshipType::AllPeople, RelationshipType::Reciprocity]
        .into_iter()
        .map(|tag| {
            let phi = NetworkSet::by_type(tag, n)?;
            let lp = crate::design::build_design_lp(&g, &phi, &target, &cfg)?;
            let oad = order_and_design(&g, &v, &phi, &cfg)?.ok_or_else(|| {
                Error::InvalidArgument(format!("exact design found no profile for {tag}"))
            })?;
            let gd = gradient_descent(&g, &v, &phi, &gd_config(n))?;
            let outcome = gd_outcome(&g, &v, &phi, &gd)?;
            Ok(Table2Row {
                relationship: tag.to_string(),
                num_weights: phi.len(),
                lp_constraints: lp.num_constraints(),
                oad_norm: l1(&oad.w),
                oad_cost: oad.social_cost,
                gd_norm: l1(&gd.w),
                gd_cost: outcome.cost,
                gd_steps: gd.steps,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeatmapMode {
    /// Expected social cost and gradient norm at the entropy equilibrium.
    EntropyNash,
    /// Cheapest pure Nash of the modified game, if any.
    PureNashGrid,
}

#[derive(Debug, Clone, Copy)]
pub struct HeatmapConfig {
    pub mode: HeatmapMode,
    /// Points per axis over [0, 1]².
    pub grid: usize,
    pub lambda: f64,
    pub seed: u64,
}

impl Default for HeatmapConfig {
    fn default() -> Self {
        Self { mode: HeatmapMode::EntropyNash, grid: 21, lambda: 0.3, seed: 0 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HeatmapCell {
    pub w1: f64,
    pub w2: f64,
    /// None in pure mode when the modified game has no pure Nash.
    pub cost: Option<f64>,
    /// ‖∂J/∂w‖₂; None in pure mode.
    pub grad_norm: Option<f64>,
}

fn heatmap_cell(
    g: &StaticGame,
    v: &SocialCost,
    phi: &NetworkSet,
    cfg: &HeatmapConfig,
    w1: f64,
    w2: f64,
) -> Result<HeatmapCell> {
    let w = [w1, w2];
    let modified = modify_costs(g, phi, &w)?;
    match cfg.mode {
        HeatmapMode::EntropyNash => {
            let ecfg = EntropyNashConfig { lambda: cfg.lambda, seed: cfg.seed, ..Default::default() };
            let rep = solve(&modified, &ecfg)?;
            if !rep.converged {
                return Err(Error::Divergence(format!(
                    "cell ({w1}, {w2}): residual {} after {} iterations",
                    rep.residual, rep.iterations
                )));
            }
            let cost = expected_social_cost(g, v, &rep.profile)?;
            let grad = social_cost_gradient(g, v, phi, &w, &rep.profile, cfg.lambda)?;
            let gn = grad.iter().map(|x| x * x).sum::<f64>().sqrt();
            Ok(HeatmapCell { w1, w2, cost: Some(cost), grad_norm: Some(gn) })
        }
        HeatmapMode::PureNashGrid => {
            let best = enumerate_pure_nash(&modified)?
                .iter()
                .map(|p| social_cost(g, v, p))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .fold(f64::INFINITY, f64::min);
            let cost = best.is_finite().then_some(best);
            Ok(HeatmapCell { w1, w2, cost, grad_norm: None })
        }
    }
}

fn heatmap_points(grid: usize) -> Vec<(f64, f64)> {
    let step = |k: usize| k as f64 / (grid - 1) as f64;
    let mut pts = Vec::with_capacity(grid * grid);
    for a in 0..grid {
        for b in 0..grid {
            pts.push((step(a), step(b)));
        }
    }
    pts
}

fn heatmap_validate(phi: &NetworkSet, cfg: &HeatmapConfig) -> Result<()> {
    if phi.len() != 2 {
        return Err(Error::InvalidArgument(format!(
            "heatmap needs exactly 2 weights, network set has {}",
            phi.len()
        )));
    }
    if cfg.grid < 2 {
        return Err(Error::InvalidArgument(format!("grid must be at least 2, got {}", cfg.grid)));
    }
    Ok(())
}

/// Sequential heatmap over the weight plane; row-major in (w1, w2).
pub fn heatmap_seq(
    g: &StaticGame,
    v: &SocialCost,
    phi: &NetworkSet,
    cfg: &HeatmapConfig,
) -> Result<Vec<HeatmapCell>> {
    heatmap_validate(phi, cfg)?;
    heatmap_points(cfg.grid)
        .into_iter()
        .map(|(w1, w2)| heatmap_cell(g, v, phi, cfg, w1, w2))
        .collect()
}

/// Heatmap over the weight plane; cells are computed in parallel when the
/// `parallel` feature is on.
#[cfg(feature = "parallel")]
pub fn heatmap(
    g: &StaticGame,
    v: &SocialCost,
    phi: &NetworkSet,
    cfg: &HeatmapConfig,
) -> Result<Vec<HeatmapCell>> {
    heatmap_validate(phi, cfg)?;
    heatmap_points(cfg.grid)
        .into_par_iter()
        .map(|(w1, w2)| heatmap_cell(g, v, phi, cfg, w1, w2))
        .collect()
}

#[cfg(not(feature = "parallel"))]
pub fn heatmap(
    g: &StaticGame,
    v: &SocialCost,
    phi: &NetworkSet,
    cfg: &HeatmapConfig,
) -> Result<Vec<HeatmapCell>> {
    heatmap_seq(g, v, phi, cfg)
}

/// Sequential batch of equilibrium solves; used by the benchmark suite.
pub fn batch_solve_seq(games: &[StaticGame], cfg: &EntropyNashConfig) -> Result<Vec<SolveReport>> {
    games.iter().map(|g| solve(g, cfg)).collect()
}

/// Batch of equilibrium solves, parallel when the `parallel` feature is on.
#[cfg(feature = "parallel")]
pub fn batch_solve(games: &[StaticGame], cfg: &EntropyNashConfig) -> Result<Vec<SolveReport>> {
    games.par_iter().map(|g| solve(g, cfg)).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn batch_solve(games: &[StaticGame], cfg: &EntropyNashConfig) -> Result<Vec<SolveReport>> {
    batch_solve_seq(games, cfg)
}

/// Game family used by the runtime scaling study.
///
/// The dilemma family keeps the exact designer honest at every size: its
/// social optimum and every cooperation-heavy profile stay undesignable
/// within the default budget, so the profile ordering is actually
/// traversed. On the traffic family the near-optimal profiles are already
/// equilibria for n ≥ 4, so design degenerates to two LP solves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchFamily {
    SocialDilemma,
    Traffic,
}

#[derive(Debug, Clone, Copy)]
pub struct ScalabilityConfig {
    pub n_start: usize,
    pub n_end: usize,
    pub repeats: usize,
    /// Rows whose median time exceeds this are censored from the fit.
    pub timeout_seconds: f64,
    pub family: BenchFamily,
}

impl Default for ScalabilityConfig {
    fn default() -> Self {
        Self {
            n_start: 2,
            n_end: 12,
            repeats: 3,
            timeout_seconds: 300.0,
            family: BenchFamily::SocialDilemma,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalabilityRow {
    pub n: usize,
    /// Median over repeats.
    pub oad_seconds: f64,
    pub gd_seconds: f64,
    pub oad_profiles_visited: usize,
    pub gd_steps: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalabilityResult {
    pub rows: Vec<ScalabilityRow>,
    /// Least-squares slope of log10(seconds) against n.
    pub oad_slope: f64,
    pub gd_slope: f64,
    /// n values censored from each fit by the timeout.
    pub oad_censored: Vec<usize>,
    pub gd_censored: Vec<usize>,
}

fn median(samples: &mut [f64]) -> f64 {
    samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let k = samples.len();
    if k % 2 == 1 {
        samples[k / 2]
    } else {
        0.5 * (samples[k / 2 - 1] + samples[k / 2])
    }
}

fn ls_slope(points: &[(f64, f64)]) -> f64 {
    let k = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    (k * sxy - sx * sy) / (k * sxx - sx * sx)
}

/// Times both designers on the two-route traffic game over a range of
/// player counts and fits log10(time) against n for each.
pub fn run_scalability(cfg: &ScalabilityConfig) -> Result<ScalabilityResult> {
    if cfg.n_start < 2 || cfg.n_end < cfg.n_start + 1 || cfg.repeats == 0 {
        return Err(Error::InvalidArgument(
            "need n_start >= 2, n_end > n_start, and at least one repeat".into(),
        ));
    }
    let v = SocialCost::SumOfPlayerCosts;
    let mut rows = Vec::new();
    for n in cfg.n_start..=cfg.n_end {
        let g = match cfg.family {
            BenchFamily::SocialDilemma => crate::scenarios::default_social_dilemma(n)?,
            BenchFamily::Traffic => default_traffic_game(n)?,
        };
        let phi = NetworkSet::individual(n)?;
        let mut oad_times = Vec::with_capacity(cfg.repeats);
        let mut gd_times = Vec::with_capacity(cfg.repeats);
        let mut visited = 0;
        let mut steps = 0;
        for _ in 0..cfg.repeats {
            let t = Instant::now();
            let oad: Option<OadResult> =
                order_and_design(&g, &v, &phi, &DesignConfig::default())?;
            oad_times.push(t.elapsed().as_secs_f64());
            visited = oad.map(|r| r.profiles_visited).unwrap_or(g.num_profiles());

            let t = Instant::now();
            let gd = gradient_descent(&g, &v, &phi, &gd_config(n))?;
            gd_times.push(t.elapsed().as_secs_f64());
            steps = gd.steps;
        }
        rows.push(ScalabilityRow {
            n,
            oad_seconds: median(&mut oad_times),
            gd_seconds: median(&mut gd_times),
            oad_profiles_visited: visited,
            gd_steps: steps,
        });
    }

    let fit = |times: Vec<(usize, f64)>| -> (f64, Vec<usize>) {
        let censored: Vec<usize> =
            times.iter().filter(|(_, t)| *t > cfg.timeout_seconds).map(|(n, _)| *n).collect();
        let pts: Vec<(f64, f64)> = times
            .into_iter()
            .filter(|(_, t)| *t <= cfg.timeout_seconds)
            .map(|(n, t)| (n as f64, t.max(1e-9).log10()))
            .collect();
        (ls_slope(&pts), censored)
    };
    let (oad_slope, oad_censored) = fit(rows.iter().map(|r| (r.n, r.oad_seconds)).collect());
    let (gd_slope, gd_censored) = fit(rows.iter().map(|r| (r.n, r.gd_seconds)).collect());
    Ok(ScalabilityResult { rows, oad_slope, gd_slope, oad_censored, gd_censored })
}

/// Formats to 6 significant digits for the CSV outputs.
pub fn sig6(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let exp = v.abs().log10().floor() as i32;
    let decimals = (5 - exp).max(0) as usize;
    format!("{:.*}", decimals, v)
}

fn profile_string(p: &[usize]) -> String {
    p.iter().map(|s| s.to_string()).collect::<Vec<_>>().join("-")
}

pub fn table1_csv(rows: &[Table1Row]) -> String {
    let mut out = String::from(
        "n,optimum,baseline_cost,baseline_kind,oad_norm,oad_cost,oad_profile,gd_norm,gd_cost,gd_steps,gd_certified_pure\n",
    );
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            r.n,
            sig6(r.optimum),
            sig6(r.baseline_cost),
            r.baseline_kind,
            sig6(r.oad_norm),
            sig6(r.oad_cost),
            profile_string(&r.oad_profile),
            sig6(r.gd_norm),
            sig6(r.gd_cost),
            r.gd_steps,
            r.gd_certified_pure,
        ));
    }
    out
}

pub fn table2_csv(rows: &[Table2Row]) -> String {
    let mut out = String::from(
        "relationship,num_weights,lp_constraints,oad_norm,oad_cost,gd_norm,gd_cost,gd_steps\n",
    );
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.relationship,
            r.num_weights,
            r.lp_constraints,
            sig6(r.oad_norm),
            sig6(r.oad_cost),
            sig6(r.gd_norm),
            sig6(r.gd_cost),
            r.gd_steps,
        ));
    }
    out
}

pub fn heatmap_csv(cells: &[HeatmapCell]) -> String {
    let mut out = String::from("w1,w2,cost,grad_norm\n");
    for c in cells {
        let cost = c.cost.map(sig6).unwrap_or_default();
        let grad = c.grad_norm.map(sig6).unwrap_or_default();
        out.push_str(&format!("{},{},{cost},{grad}\n", sig6(c.w1), sig6(c.w2)));
    }
    out
}

pub fn scalability_csv(res: &ScalabilityResult) -> String {
    let mut out = String::from("n,oad_seconds,gd_seconds,oad_profiles_visited,gd_steps\n");
    for r in &res.rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.n,
            sig6(r.oad_seconds),
            sig6(r.gd_seconds),
            r.oad_profiles_visited,
            r.gd_steps,
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig6_formats_six_significant_digits() {
        assert_eq!(sig6(3.333333333), "3.33333");
        assert_eq!(sig6(10.295), "10.2950");
        assert_eq!(sig6(0.0001234567), "0.000123457");
        assert_eq!(sig6(-1.5), "-1.50000");
        assert_eq!(sig6(0.0), "0");
    }

    #[test]
    fn rounded_profile_takes_argmax() {
        let x = MixedProfile::new(vec![vec![0.7, 0.3], vec![0.1, 0.2, 0.7]]).unwrap();
        assert_eq!(rounded_profile(&x).one_based(), vec![1, 3]);
    }

    #[test]
    fn table2_has_three_rows_with_expected_counts() {
        let rows = table2().unwrap();
        assert_eq!(rows.len(), 3);
        let by: Vec<(usize, usize)> =
            rows.iter().map(|r| (r.num_weights, r.lp_constraints)).collect();
        assert_eq!(by, vec![(6, 16), (3, 10), (3, 10)]);
        for r in &rows {
            // all three relationship families can push the three-player
            // traffic game to the all-carpool optimum
            assert!((r.oad_cost - 5.0).abs() < 1e-6, "{}: {}", r.relationship, r.oad_cost);
        }
    }

    #[test]
    fn heatmap_par_and_seq_agree() {
        let g = default_traffic_game(2).unwrap();
        let phi = NetworkSet::individual(2).unwrap();
        let cfg = HeatmapConfig { grid: 5, ..Default::default() };
        let v = SocialCost::SumOfPlayerCosts;
        let a = heatmap(&g, &v, &phi, &cfg).unwrap();
        let b = heatmap_seq(&g, &v, &phi, &cfg).unwrap();
        assert_eq!(a.len(), 25);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.w1, y.w1);
            assert_eq!(x.w2, y.w2);
            assert!((x.cost.unwrap() - y.cost.unwrap()).abs() < 1e-9);
        }
    }

    #[test]
    fn pure_mode_heatmap_corner_values() {
        let g = default_traffic_game(2).unwrap();
        let phi = NetworkSet::individual(2).unwrap();
        let cfg = HeatmapConfig { mode: HeatmapMode::PureNashGrid, grid: 2, ..Default::default() };
        let cells = heatmap_seq(&g, &SocialCost::SumOfPlayerCosts, &phi, &cfg).unwrap();
        // w = (0,0): unmodified game, Nash is mutual congestion at cost 6
        assert!((cells[0].cost.unwrap() - 6.0).abs() < 1e-9);
        // w = (1,1): fully internalized, all-carpool becomes Nash
        assert!((cells[3].cost.unwrap() - 10.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn scalability_runs_on_a_small_range() {
        let cfg = ScalabilityConfig { n_start: 2, n_end: 4, repeats: 1, timeout_seconds: 60.0, ..Default::default() };
        let res = run_scalability(&cfg).unwrap();
        assert_eq!(res.rows.len(), 3);
        assert!(res.rows.iter().all(|r| r.oad_seconds >= 0.0 && r.gd_seconds >= 0.0));
        assert!(res.oad_censored.is_empty() && res.gd_censored.is_empty());
    }

    #[test]
    fn csv_emitters_are_well_formed() {
        let rows = vec![Table1Row {
            n: 2,
            optimum: 10.0 / 3.0,
            baseline_cost: 6.0,
            baseline_kind: "pure".into(),
            oad_norm: 0.2,
            oad_cost: 10.0 / 3.0,
            oad_profile: vec![1, 1],
            gd_norm: 0.3,
            gd_cost: 10.0 / 3.0,
            gd_steps: 42,
            gd_certified_pure: true,
        }];
        let csv = table1_csv(&rows);
        let mut lines = csv.lines();
        let header = lines.next().unwrap();
        let row = lines.next().unwrap();
        assert_eq!(header.split(',').count(), row.split(',').count());
        assert!(row.contains("1-1"));
    }
}
