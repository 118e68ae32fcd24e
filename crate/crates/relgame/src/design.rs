//! The exact designer: an L1-minimizing LP that makes a target profile a
//! pure Nash equilibrium of the modified game, and the ordering loop that
//! tries profiles in ascending social cost.

use crate::game::{
    is_pure_nash, profiles, social_cost, PureProfile, SocialCost, StaticGame, PROFILE_GUARD,
};
use crate::lp::{solve_lp, LinearProgram, LpOutcome};
use crate::relationship::{modify_costs, NetworkSet};
use crate::{Error, Result};
use serde::Serialize;
use std::time::Instant;

/// Budget slack accepted on ‖w‖₁ ≤ k.
pub const BUDGET_TOL: f64 = 1e-7;
/// Weights below this magnitude are snapped to exactly zero before the
/// post-hoc Nash verification, so the w = 0 case stays bitwise exact.
const SNAP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignMode {
    /// w is free; encoded as the split w = w⁺ − w⁻ with w⁺, w⁻ ≥ 0.
    Signed,
    /// w ≥ 0 directly.
    Nonnegative,
}

#[derive(Debug, Clone, Copy)]
pub struct DesignConfig {
    /// Budget k in ‖w‖₁ ≤ k.
    pub budget: f64,
    pub sign_mode: SignMode,
}

impl Default for DesignConfig {
    fn default() -> Self {
        Self { budget: 1.0, sign_mode: SignMode::Signed }
    }
}

impl DesignConfig {
    pub fn with_budget(budget: f64) -> Self {
        Self { budget, ..Self::default() }
    }

    fn validate(&self) -> Result<()> {
        if !(self.budget > 0.0) {
            return Err(Error::InvalidArgument(format!("budget k must be positive, got {}", self.budget)));
        }
        Ok(())
    }
}

/// Builds the DESIGN LP for a target profile.
///
/// Variables are the split pair (w⁺, w⁻) in signed mode or w alone in
/// nonnegative mode; the objective 𝟙ᵀ(w⁺ + w⁻) realizes min ‖w‖₁. One row
/// per (player, deviation) Nash inequality, one budget row, plus the
/// per-variable nonnegativity bounds counted by
/// [`LinearProgram::num_constraints`].
pub fn build_design_lp(
    g: &StaticGame,
    phi: &NetworkSet,
    target: &PureProfile,
    cfg: &DesignConfig,
) -> Result<LinearProgram> {
    cfg.validate()?;
    target.validate(g)?;
    if phi.num_players() != g.num_players() {
        return Err(Error::ShapeMismatch(format!(
            "network set is over {} players, game has {}",
            phi.num_players(),
            g.num_players()
        )));
    }
    let n = g.num_players();
    let m = phi.len();
    let num_vars = match cfg.sign_mode {
        SignMode::Signed => 2 * m,
        SignMode::Nonnegative => m,
    };

    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    let t = target.zero_based();
    let mut dev = t.to_vec();
    for i in 0..n {
        let original = dev[i];
        for alt in 0..g.strategy_counts()[i] {
            if alt == original {
                continue;
            }
            dev[i] = alt;
            // Σ_r w_r · Σ_j (φ_r)_{ij} (u^j(target) − u^j(dev)) ≤ u^i(dev) − u^i(target)
            let mut coeffs = vec![0.0; num_vars];
            for r in 0..m {
                let net = phi.network(r);
                let mut c = 0.0;
                for j in 0..n {
                    let a = net[i * n + j];
                    if a != 0.0 {
                        c += a * (g.cost_tensor(j).get(t) - g.cost_tensor(j).get(&dev));
                    }
                }
                coeffs[r] = c;
                if cfg.sign_mode == SignMode::Signed {
                    coeffs[m + r] = -c;
                }
            }
            rows.push(coeffs);
            rhs.push(g.cost_tensor(i).get(&dev) - g.cost_tensor(i).get(t));
        }
        dev[i] = original;
    }
    // budget row: 1ᵀ(w⁺ + w⁻) ≤ k
    rows.push(vec![1.0; num_vars]);
    rhs.push(cfg.budget);

    Ok(LinearProgram { objective: vec![1.0; num_vars], rows, rhs, nonnegative: true })
}

fn weights_from_solution(solution: &[f64], m: usize, mode: SignMode) -> Vec<f64> {
    let mut w: Vec<f64> = match mode {
        SignMode::Signed => (0..m).map(|r| solution[r] - solution[m + r]).collect(),
        SignMode::Nonnegative => solution[..m].to_vec(),
    };
    for v in w.iter_mut() {
        if v.abs() < SNAP_TOL {
            *v = 0.0;
        }
    }
    w
}

/// Runs the DESIGN subproblem. Returns `Some(w)` only when the modified
/// game verifiably has a pure Nash at the target; `None` means infeasible.
///
/// The post-hoc check guards against solver tolerance leaks: the LP is
/// re-solved once with the Nash rows tightened by a small margin when the
/// unmargined optimum fails exact verification.
pub fn design(
    g: &StaticGame,
    phi: &NetworkSet,
    target: &PureProfile,
    cfg: &DesignConfig,
) -> Result<Option<Vec<f64>>> {
    let lp = build_design_lp(g, phi, target, cfg)?;
    let attempt = |lp: &LinearProgram| -> Result<Option<Vec<f64>>> {
        match solve_lp(lp)? {
            LpOutcome::Optimal { solution, .. } => {
                let w = weights_from_solution(&solution, phi.len(), cfg.sign_mode);
                let modified = modify_costs(g, phi, &w)?;
                if is_pure_nash(&modified, target)? {
                    Ok(Some(w))
                } else {
                    Ok(None)
                }
            }
            LpOutcome::Infeasible => Ok(None),
            // objective and budget row keep the DESIGN LP bounded
            LpOutcome::Unbounded => Err(Error::Lp(crate::lp::LpError::Malformed(
                "DESIGN LP reported unbounded".into(),
            ))),
        }
    };
    if let Some(w) = attempt(&lp)? {
        return Ok(Some(w));
    }
    // tightened retry; only reached when verification failed marginally
    let mut tightened = lp;
    let last = tightened.rhs.len() - 1; // budget row stays as-is
    for b in tightened.rhs[..last].iter_mut() {
        *b -= 1e-9;
    }
    match solve_lp(&tightened)? {
        LpOutcome::Optimal { solution, .. } => {
            let w = weights_from_solution(&solution, phi.len(), cfg.sign_mode);
            let modified = modify_costs(g, phi, &w)?;
            if is_pure_nash(&modified, target)? {
                Ok(Some(w))
            } else {
                Ok(None)
            }
        }
        _ => Ok(None),
    }
}

/// Result of a successful Order-and-Design run.
#[derive(Debug, Clone, Serialize)]
pub struct OadResult {
    pub w: Vec<f64>,
    /// Achieved profile, 1-based.
    pub target_profile: Vec<usize>,
    pub social_cost: f64,
    pub profiles_visited: usize,
    pub elapsed_seconds: f64,
}

/// Visits pure profiles in ascending social cost (ties lexicographic) and
/// returns the first designable weight vector. `None` means DESIGN failed
/// for every profile.
pub fn order_and_design(
    g: &StaticGame,
    v: &SocialCost,
    phi: &NetworkSet,
    cfg: &DesignConfig,
) -> Result<Option<OadResult>> {
    let start = Instant::now();
    let total = g.num_profiles();
    if total > PROFILE_GUARD {
        return Err(Error::ProfileGuard(total, PROFILE_GUARD));
    }
    let vt = v.tensor(g)?;
    // Materialized ascending order; equivalent to repeated argmin over a
    // shrinking set.
    let mut ordered: Vec<(f64, Vec<usize>)> =
        profiles(g.strategy_counts()).map(|p| (vt.get(&p), p)).collect();
    ordered.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then_with(|| a.1.cmp(&b.1)));

    for (visited, (cost, p)) in ordered.into_iter().enumerate() {
        let target = PureProfile::from_zero_based(p);
        if let Some(w) = design(g, phi, &target, cfg).map_err(|e| {
            Error::InvalidArgument(format!(
                "DESIGN failed at profile {:?}: {e}",
                target.one_based()
            ))
        })? {
            return Ok(Some(OadResult {
                w,
                target_profile: target.one_based(),
                social_cost: cost,
                profiles_visited: visited + 1,
                elapsed_seconds: start.elapsed().as_secs_f64(),
            }));
        }
    }
    Ok(None)
}

/// Post-hoc report for a designed weight vector.
#[derive(Debug, Clone, Serialize)]
pub struct OutcomeReport {
    /// 1-based profile.
    pub profile: Vec<usize>,
    pub social_cost: f64,
    pub is_nash: bool,
}

/// Recomputes the social cost and Nash status of `target` on the modified
/// game; `is_nash` must hold for any w produced by [`order_and_design`].
pub fn achieved_outcome(
    g: &StaticGame,
    v: &SocialCost,
    phi: &NetworkSet,
    w: &[f64],
    target: &PureProfile,
) -> Result<OutcomeReport> {
    let modified = modify_costs(g, phi, w)?;
    Ok(OutcomeReport {
        profile: target.one_based(),
        social_cost: social_cost(g, v, target)?,
        is_nash: is_pure_nash(&modified, target)?,
    })
}
