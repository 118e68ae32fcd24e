//! Entropy-regularized equilibria and the gradient designer built on them.
//!
//! With regularization weight λ the equilibrium is the fixed point of the
//! logit map x^i = softmax(−h_i/λ), where h_i is player i's expected cost
//! vector in the modified game. The solver runs Newton on F(x) = x − s(x)
//! with a damped fixed-point fallback; the designer differentiates the
//! equilibrium through that fixed point and descends the expected social
//! cost with an L1 penalty.

use crate::game::{ecm_all_raw, ecv_all_raw, ecv_raw, MixedProfile, SocialCost, StaticGame, Tensor};
use crate::relationship::{modify_costs, NetworkSet};
use crate::{Error, Result};
use nalgebra::{DMatrix, DVector};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Ridge added to the fixed-point Jacobian when its plain factorization
/// fails during implicit differentiation.
pub const GRADIENT_RIDGE: f64 = 1e-10;

#[derive(Debug, Clone, Copy)]
pub struct EntropyNashConfig {
    /// Entropy regularization weight λ > 0.
    pub lambda: f64,
    /// Convergence threshold on ‖x − s(x)‖₂.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Seed for the Dirichlet initial point.
    pub seed: u64,
}

impl Default for EntropyNashConfig {
    fn default() -> Self {
        Self { lambda: 1.0, tolerance: 1e-10, max_iterations: 500, seed: 0 }
    }
}

impl EntropyNashConfig {
    pub fn with_lambda(lambda: f64) -> Self {
        Self { lambda, ..Self::default() }
    }

    fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0) {
            return Err(Error::InvalidArgument(format!("lambda must be positive, got {}", self.lambda)));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidArgument("tolerance must be positive".into()));
        }
        Ok(())
    }
}

/// Outcome of one equilibrium solve.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub profile: MixedProfile,
    pub converged: bool,
    pub iterations: usize,
    /// Final ‖x − s(x)‖₂.
    pub residual: f64,
}

pub fn softmax(z: &[f64]) -> Vec<f64> {
    let max = z.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = z.iter().map(|&v| (v - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / sum).collect()
}

/// d softmax(z) / dz at output p: diag(p) − p pᵀ.
fn softmax_jacobian(p: &[f64]) -> DMatrix<f64> {
    let k = p.len();
    DMatrix::from_fn(k, k, |a, b| if a == b { p[a] * (1.0 - p[a]) } else { -p[a] * p[b] })
}

fn block_offsets(shape: &[usize]) -> (Vec<usize>, usize) {
    let mut offs = Vec::with_capacity(shape.len());
    let mut total = 0;
    for &s in shape {
        offs.push(total);
        total += s;
    }
    (offs, total)
}

/// One application of the logit map: s_i = softmax(−h_i / λ).
pub fn fixed_point_map(g: &StaticGame, x: &[Vec<f64>], lambda: f64) -> Vec<Vec<f64>> {
    (0..g.num_players())
        .map(|i| {
            let h = ecv_raw(x, g.cost_tensor(i), i);
            softmax(&h.iter().map(|&v| -v / lambda).collect::<Vec<_>>())
        })
        .collect()
}

/// Jacobian of F(x) = x − s(x), evaluated with the map outputs `s`.
fn jacobian_f(g: &StaticGame, x: &[Vec<f64>], s: &[Vec<f64>], lambda: f64) -> DMatrix<f64> {
    let n = g.num_players();
    let (offs, dim) = block_offsets(g.strategy_counts());
    let mut jac = DMatrix::identity(dim, dim);
    for i in 0..n {
        let jp = softmax_jacobian(&s[i]);
        let cross = ecm_all_raw(x, g.cost_tensor(i), i);
        for j in 0..n {
            if j == i {
                continue; // h_i does not depend on x^i
            }
            let dh = DMatrix::from_fn(s[i].len(), x[j].len(), |a, b| cross[j][a][b]);
            let block = &jp * (&dh * (-1.0 / lambda));
            for a in 0..block.nrows() {
                for b in 0..block.ncols() {
                    jac[(offs[i] + a, offs[j] + b)] -= block[(a, b)];
                }
            }
        }
    }
    jac
}

/// Jacobian of F(x) = x − s(x) at `x`, stacked player-major; exposed for
/// verification harnesses.
pub fn fixed_point_jacobian(g: &StaticGame, x: &[Vec<f64>], lambda: f64) -> DMatrix<f64> {
    let s = fixed_point_map(g, x, lambda);
    jacobian_f(g, x, &s, lambda)
}

fn stack(x: &[Vec<f64>]) -> DVector<f64> {
    DVector::from_iterator(x.iter().map(Vec::len).sum(), x.iter().flatten().cloned())
}

fn unstack(v: &DVector<f64>, shape: &[usize]) -> Vec<Vec<f64>> {
    let (offs, _) = block_offsets(shape);
    shape.iter().zip(&offs).map(|(&s, &o)| v.as_slice()[o..o + s].to_vec()).collect()
}

fn residual_norm(x: &[Vec<f64>], s: &[Vec<f64>]) -> f64 {
    x.iter()
        .flatten()
        .zip(s.iter().flatten())
        .map(|(&a, &b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

fn dirichlet_init(g: &StaticGame, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    g.strategy_counts()
        .iter()
        .map(|&k| {
            let e: Vec<f64> = (0..k).map(|_| -rng.gen_range(f64::MIN_POSITIVE..1.0_f64).ln()).collect();
            let sum: f64 = e.iter().sum();
            e.into_iter().map(|v| v / sum).collect()
        })
        .collect()
}

/// Solves for the entropy-regularized equilibrium from a seeded random
/// interior start.
pub fn solve(g: &StaticGame, cfg: &EntropyNashConfig) -> Result<SolveReport> {
    cfg.validate()?;
    let init = dirichlet_init(g, cfg.seed);
    solve_from(g, cfg, &init)
}

/// Same as [`solve`] but warm-started from `init` (distributions over each
/// player's strategies; not required to be feasible to machine precision).
pub fn solve_from(g: &StaticGame, cfg: &EntropyNashConfig, init: &[Vec<f64>]) -> Result<SolveReport> {
    cfg.validate()?;
    let shape = g.strategy_counts();
    if init.len() != g.num_players() || init.iter().zip(shape).any(|(d, &k)| d.len() != k) {
        return Err(Error::ShapeMismatch("initial point does not match the game's strategy counts".into()));
    }
    let mut x: Vec<Vec<f64>> = init.to_vec();
    let mut s = fixed_point_map(g, &x, cfg.lambda);
    let mut res = residual_norm(&x, &s);
    let mut iterations = 0;

    while res > cfg.tolerance && iterations < cfg.max_iterations {
        iterations += 1;
        let mut stepped = false;
        let jac = jacobian_f(g, &x, &s, cfg.lambda);
        let f = stack(&x) - stack(&s);
        if let Some(delta) = jac.lu().solve(&(-&f)) {
            let cand = unstack(&(stack(&x) + delta), shape);
            // reject wild Newton steps that leave the solver's working box
            if cand.iter().flatten().all(|&v| (-0.5..=1.5).contains(&v)) {
                let s_cand = fixed_point_map(g, &cand, cfg.lambda);
                let r_cand = residual_norm(&cand, &s_cand);
                if r_cand < res {
                    x = cand;
                    s = s_cand;
                    res = r_cand;
                    stepped = true;
                }
            }
        }
        if !stepped {
            // damped fixed-point step; a contraction near the solution
            for (xi, si) in x.iter_mut().zip(&s) {
                for (a, &b) in xi.iter_mut().zip(si) {
                    *a += 0.5 * (b - *a);
                }
            }
            s = fixed_point_map(g, &x, cfg.lambda);
            res = residual_norm(&x, &s);
        }
    }

    // re-project through the map so the reported point is an exact
    // distribution tuple
    let last = fixed_point_map(g, &x, cfg.lambda);
    let profile = MixedProfile::new(last)?;
    Ok(SolveReport { profile, converged: res <= cfg.tolerance, iterations, residual: res })
}

/// Sensitivity of the equilibrium to the relationship weights.
#[derive(Debug, Clone)]
pub struct EquilibriumGradient {
    /// `dx_dw[r]` is ∂x/∂w_r, stacked player blocks of total length Σ|S_i|.
    pub dx_dw: Vec<Vec<f64>>,
    /// True when the Jacobian factorization needed a ridge.
    pub ridge_used: bool,
}

/// Implicit differentiation at a solved equilibrium `x` of the game
/// modified by (φ, w): ∂x/∂w = −(∂F/∂x)⁻¹ ∂F/∂w.
pub fn equilibrium_gradient(
    g: &StaticGame,
    phi: &NetworkSet,
    w: &[f64],
    x: &MixedProfile,
    lambda: f64,
) -> Result<EquilibriumGradient> {
    if !(lambda > 0.0) {
        return Err(Error::InvalidArgument(format!("lambda must be positive, got {lambda}")));
    }
    phi.check_weights(w)?;
    x.validate_for(g.strategy_counts())?;
    let modified = modify_costs(g, phi, w)?;
    let n = g.num_players();
    let m = phi.len();
    let dists = x.distributions();
    let s = fixed_point_map(&modified, dists, lambda);
    let (offs, dim) = block_offsets(g.strategy_counts());

    let jac = jacobian_f(&modified, dists, &s, lambda);
    // ∂h_i/∂w_r is the expected-cost vector of Σ_j (φ_r)_{ij} u^j over the
    // original costs; by linearity, combine per-player ecv tables instead
    // of materializing each direction tensor
    // by_tensor[j][i] = ecv of u^j for player i
    let by_tensor: Vec<Vec<Vec<f64>>> =
        (0..n).map(|j| ecv_all_raw(dists, g.cost_tensor(j))).collect();
    let mut rhs = DMatrix::zeros(dim, m);
    for r in 0..m {
        let net = phi.network(r);
        for i in 0..n {
            let mut dh = vec![0.0; s[i].len()];
            for j in 0..n {
                let a = net[i * n + j];
                if a != 0.0 {
                    for (o, &e) in dh.iter_mut().zip(&by_tensor[j][i]) {
                        *o += a * e;
                    }
                }
            }
            if dh.iter().all(|&v| v == 0.0) {
                continue;
            }
            let jp = softmax_jacobian(&s[i]);
            let col = &jp * DVector::from_vec(dh.iter().map(|&v| -v / lambda).collect());
            for a in 0..col.len() {
                // rhs = −∂F/∂w = ∂s/∂w
                rhs[(offs[i] + a, r)] = col[a];
            }
        }
    }

    let (sol, ridge_used) = match jac.clone().lu().solve(&rhs) {
        Some(sol) => (sol, false),
        None => {
            let ridged = jac + DMatrix::identity(dim, dim) * GRADIENT_RIDGE;
            let sol = ridged.lu().solve(&rhs).ok_or_else(|| {
                Error::InvalidArgument("fixed-point Jacobian is singular even with ridge".into())
            })?;
            (sol, true)
        }
    };
    let dx_dw = (0..m).map(|r| sol.column(r).iter().cloned().collect()).collect();
    Ok(EquilibriumGradient { dx_dw, ridge_used })
}

/// Gradient of the expected social cost J(x(w)) with respect to w, at a
/// solved equilibrium. Social cost is evaluated on the original game.
pub fn social_cost_gradient(
    g: &StaticGame,
    v: &SocialCost,
    phi: &NetworkSet,
    w: &[f64],
    x: &MixedProfile,
    lambda: f64,
) -> Result<Vec<f64>> {
    let vt = v.tensor(g)?;
    let eg = equilibrium_gradient(g, phi, w, x, lambda)?;
    Ok(chain_social_gradient(g, &vt, x, &eg))
}

fn chain_social_gradient(
    g: &StaticGame,
    vt: &Tensor,
    x: &MixedProfile,
    eg: &EquilibriumGradient,
) -> Vec<f64> {
    let dists = x.distributions();
    // ∂J/∂x^i_a, stacked like dx_dw
    let mut dj: Vec<f64> = Vec::new();
    for i in 0..g.num_players() {
        dj.extend(ecv_raw(dists, vt, i));
    }
    eg.dx_dw
        .iter()
        .map(|col| col.iter().zip(&dj).map(|(&a, &b)| a * b).sum())
        .collect()
}

#[derive(Debug, Clone, Copy)]
pub struct GdConfig {
    /// Step size.
    pub alpha: f64,
    /// Stop when ‖∇(J + γ‖w‖₁)‖₂ < β.
    pub beta: f64,
    /// L1 penalty weight γ ≥ 0.
    pub gamma: f64,
    pub max_steps: usize,
    pub entropy: EntropyNashConfig,
}

impl Default for GdConfig {
    fn default() -> Self {
        Self { alpha: 0.01, beta: 0.1, gamma: 1.0, max_steps: 20_000, entropy: EntropyNashConfig::default() }
    }
}

/// One row of the descent trace, in emission order.
#[derive(Debug, Clone, Serialize)]
pub struct GdTraceRow {
    pub step: usize,
    /// J(x(w)) + γ‖w‖₁.
    pub objective: f64,
    pub expected_social_cost: f64,
    pub l1_norm: f64,
    pub grad_norm: f64,
}

#[derive(Debug, Clone)]
pub struct GdResult {
    pub w: Vec<f64>,
    pub steps: usize,
    pub converged: bool,
    pub equilibrium: SolveReport,
    pub trace: Vec<GdTraceRow>,
    /// True when any step needed the ridged Jacobian.
    pub ridge_used: bool,
}

const DIVERGENCE_WINDOW: usize = 50;

/// Projected subgradient descent on J(x(w)) + γ‖w‖₁ from the uniform
/// start w = 1/m, with sign(0) = 0 in the penalty term. Equilibrium solves
/// are warm-started from the previous step's solution.
pub fn gradient_descent(
    g: &StaticGame,
    v: &SocialCost,
    phi: &NetworkSet,
    cfg: &GdConfig,
) -> Result<GdResult> {
    cfg.entropy.validate()?;
    if cfg.gamma < 0.0 {
        return Err(Error::InvalidArgument(format!("gamma must be nonnegative, got {}", cfg.gamma)));
    }
    if !(cfg.alpha > 0.0) || !(cfg.beta > 0.0) {
        return Err(Error::InvalidArgument("alpha and beta must be positive".into()));
    }
    let m = phi.len();
    let vt = v.tensor(g)?;
    let mut w = vec![1.0 / m as f64; m];
    let mut warm: Option<Vec<Vec<f64>>> = None;
    let mut trace = Vec::new();
    let mut ridge_used = false;
    let mut last_objective = f64::INFINITY;
    let mut increases = 0usize;
    let mut report = None;

    for step in 0..cfg.max_steps {
        let modified = modify_costs(g, phi, &w)?;
        let rep = match &warm {
            Some(init) => solve_from(&modified, &cfg.entropy, init)?,
            None => solve(&modified, &cfg.entropy)?,
        };
        warm = Some(rep.profile.distributions().to_vec());

        let j = crate::game::expected_social_cost(g, v, &rep.profile)?;
        let eg = equilibrium_gradient(g, phi, &w, &rep.profile, cfg.entropy.lambda)?;
        ridge_used |= eg.ridge_used;
        let mut grad = chain_social_gradient(g, &vt, &rep.profile, &eg);
        for (gr, &wr) in grad.iter_mut().zip(&w) {
            *gr += cfg.gamma * sign0(wr);
        }
        let grad_norm = grad.iter().map(|v| v * v).sum::<f64>().sqrt();
        let l1: f64 = w.iter().map(|v| v.abs()).sum();
        let objective = j + cfg.gamma * l1;
        trace.push(GdTraceRow { step, objective, expected_social_cost: j, l1_norm: l1, grad_norm });

        if objective > last_objective {
            increases += 1;
            if increases >= DIVERGENCE_WINDOW {
                return Err(Error::Divergence(format!(
                    "objective increased for {DIVERGENCE_WINDOW} consecutive steps (now {objective:.6})"
                )));
            }
        } else {
            increases = 0;
        }
        last_objective = objective;
        report = Some(rep);

        if grad_norm < cfg.beta {
            return Ok(GdResult {
                w,
                steps: step + 1,
                converged: true,
                equilibrium: report.unwrap(),
                trace,
                ridge_used,
            });
        }
        for (wr, gr) in w.iter_mut().zip(&grad) {
            *wr -= cfg.alpha * gr;
        }
    }

    Ok(GdResult {
        w,
        steps: cfg.max_steps,
        converged: false,
        equilibrium: report.expect("max_steps must be positive"),
        trace,
        ridge_used,
    })
}

fn sign0(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{StaticGame, Tensor};
    use rand_chacha::ChaCha8Rng;

    fn random_game(rng: &mut ChaCha8Rng, counts: &[usize]) -> StaticGame {
        let len: usize = counts.iter().product();
        let tensors = (0..counts.len())
            .map(|_| {
                Tensor::new(counts.to_vec(), (0..len).map(|_| rng.gen_range(0.0..5.0)).collect())
                    .unwrap()
            })
            .collect();
        StaticGame::new(tensors).unwrap()
    }

    #[test]
    fn softmax_normalizes_and_is_shift_invariant() {
        let p = softmax(&[1.0, 2.0, 3.0]);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        let q = softmax(&[101.0, 102.0, 103.0]);
        for (a, b) in p.iter().zip(&q) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(p[2] > p[1] && p[1] > p[0]);
    }

    #[test]
    fn large_lambda_yields_near_uniform_equilibrium() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let g = random_game(&mut rng, &[2, 3]);
        let rep = solve(&g, &EntropyNashConfig::with_lambda(1e6)).unwrap();
        assert!(rep.converged);
        for (d, &k) in rep.profile.distributions().iter().zip(g.strategy_counts()) {
            for &p in d {
                assert!((p - 1.0 / k as f64).abs() < 1e-4);
            }
        }
    }

    #[test]
    fn solution_satisfies_logit_consistency() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for trial in 0..20 {
            let counts: Vec<usize> = (0..rng.gen_range(2..4usize)).map(|_| rng.gen_range(2..4usize)).collect();
            let g = random_game(&mut rng, &counts);
            let lambda = rng.gen_range(0.3..2.0);
            let cfg = EntropyNashConfig { lambda, seed: trial, ..Default::default() };
            let rep = solve(&g, &cfg).unwrap();
            assert!(rep.converged, "trial {trial} residual {}", rep.residual);
            let s = fixed_point_map(&g, rep.profile.distributions(), lambda);
            for (xi, si) in rep.profile.distributions().iter().zip(&s) {
                for (a, b) in xi.iter().zip(si) {
                    assert!((a - b).abs() < 1e-8);
                }
            }
        }
    }

    #[test]
    fn seeds_agree_on_the_solution_for_strong_regularization() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let g = random_game(&mut rng, &[2, 2, 2]);
        let base =
            solve(&g, &EntropyNashConfig { lambda: 2.0, seed: 0, ..Default::default() }).unwrap();
        for seed in 1..5 {
            let other =
                solve(&g, &EntropyNashConfig { lambda: 2.0, seed, ..Default::default() }).unwrap();
            for (a, b) in base
                .profile
                .distributions()
                .iter()
                .flatten()
                .zip(other.profile.distributions().iter().flatten())
            {
                assert!((a - b).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..10 {
            let g = random_game(&mut rng, &[2, 3]);
            let lambda = 0.7;
            let x: Vec<Vec<f64>> = vec![vec![0.6, 0.4], vec![0.2, 0.5, 0.3]];
            let s = fixed_point_map(&g, &x, lambda);
            let jac = jacobian_f(&g, &x, &s, lambda);
            let f0 = stack(&x) - stack(&s);
            let eps = 1e-6;
            let (_, dim) = block_offsets(g.strategy_counts());
            for col in 0..dim {
                let mut xp = stack(&x);
                xp[col] += eps;
                let xp = unstack(&xp, g.strategy_counts());
                let sp = fixed_point_map(&g, &xp, lambda);
                let fp = stack(&xp) - stack(&sp);
                for row in 0..dim {
                    let fd = (fp[row] - f0[row]) / eps;
                    assert!(
                        (jac[(row, col)] - fd).abs() < 1e-5 * (1.0 + fd.abs()),
                        "J[{row},{col}] = {} vs FD {fd}",
                        jac[(row, col)]
                    );
                }
            }
        }
    }

    #[test]
    fn ecv_table_combination_equals_direction_tensor_ecv() {
        use crate::game::ecv_raw;
        use crate::relationship::modification_direction;
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let g = random_game(&mut rng, &[2, 3, 2]);
        let phi = NetworkSet::individual(3).unwrap();
        let x: Vec<Vec<f64>> = vec![vec![0.6, 0.4], vec![0.2, 0.5, 0.3], vec![0.9, 0.1]];
        for r in 0..phi.len() {
            let net = phi.network(r);
            for i in 0..3 {
                let direct = ecv_raw(&x, &modification_direction(&g, &phi, r, i), i);
                let mut combined = vec![0.0; g.strategy_counts()[i]];
                for j in 0..3 {
                    let a = net[i * 3 + j];
                    if a != 0.0 {
                        for (o, e) in
                            combined.iter_mut().zip(ecv_raw(&x, g.cost_tensor(j), i))
                        {
                            *o += a * e;
                        }
                    }
                }
                for (d, c) in direct.iter().zip(&combined) {
                    assert!((d - c).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn equilibrium_gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for trial in 0..10 {
            let n = rng.gen_range(2..4usize);
            let counts = vec![2usize; n];
            let g = random_game(&mut rng, &counts);
            let phi = NetworkSet::all_people(n).unwrap();
            let w: Vec<f64> = (0..phi.len()).map(|_| rng.gen_range(-0.3..0.3)).collect();
            let lambda = 1.0;
            let cfg = EntropyNashConfig { lambda, seed: trial, ..Default::default() };

            let solve_at = |wv: &[f64]| {
                let modified = modify_costs(&g, &phi, wv).unwrap();
                solve(&modified, &cfg).unwrap().profile
            };
            let x = solve_at(&w);
            let eg = equilibrium_gradient(&g, &phi, &w, &x, lambda).unwrap();
            let eps = 1e-5;
            for r in 0..phi.len() {
                let mut wp = w.clone();
                wp[r] += eps;
                let mut wm = w.clone();
                wm[r] -= eps;
                let xp = stack(solve_at(&wp).distributions());
                let xm = stack(solve_at(&wm).distributions());
                for (k, &an) in eg.dx_dw[r].iter().enumerate() {
                    let fd = (xp[k] - xm[k]) / (2.0 * eps);
                    assert!((an - fd).abs() < 1e-3 * (1.0 + fd.abs()), "dx[{k}]/dw[{r}] = {an} vs {fd}");
                }
            }
        }
    }

    #[test]
    fn social_cost_gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        for trial in 0..20 {
            let n = rng.gen_range(2..4usize);
            let counts: Vec<usize> = (0..n).map(|_| rng.gen_range(2..4usize)).collect();
            let g = random_game(&mut rng, &counts);
            let phi = NetworkSet::individual(n).unwrap();
            let w: Vec<f64> = (0..phi.len()).map(|_| rng.gen_range(-0.2..0.2)).collect();
            let lambda = 1.0;
            let cfg = EntropyNashConfig { lambda, seed: trial, ..Default::default() };
            let v = SocialCost::SumOfPlayerCosts;

            let j_at = |wv: &[f64]| {
                let modified = modify_costs(&g, &phi, wv).unwrap();
                let x = solve(&modified, &cfg).unwrap().profile;
                crate::game::expected_social_cost(&g, &v, &x).unwrap()
            };
            let x = {
                let modified = modify_costs(&g, &phi, &w).unwrap();
                solve(&modified, &cfg).unwrap().profile
            };
            let grad = social_cost_gradient(&g, &v, &phi, &w, &x, lambda).unwrap();
            let eps = 1e-5;
            for r in 0..phi.len() {
                let mut wp = w.clone();
                wp[r] += eps;
                let mut wm = w.clone();
                wm[r] -= eps;
                let fd = (j_at(&wp) - j_at(&wm)) / (2.0 * eps);
                assert!((grad[r] - fd).abs() < 1e-3 * (1.0 + fd.abs()), "dJ/dw[{r}] = {} vs {fd}", grad[r]);
            }
        }
    }

    #[test]
    fn descent_reduces_social_cost_on_prisoners_dilemma() {
        let g = crate::scenarios::make_prisoners_dilemma();
        let phi = NetworkSet::individual(2).unwrap();
        let cfg = GdConfig {
            gamma: 0.1,
            entropy: EntropyNashConfig { lambda: 0.2, ..Default::default() },
            ..Default::default()
        };
        let res = gradient_descent(&g, &SocialCost::SumOfPlayerCosts, &phi, &cfg).unwrap();
        assert!(res.converged, "stopped after {} steps, grad {}", res.steps, res.trace.last().unwrap().grad_norm);
        let first = res.trace.first().unwrap().expected_social_cost;
        let last = res.trace.last().unwrap().expected_social_cost;
        // mutual defection costs 4; cooperation brings the sum toward 2
        assert!(last < first, "no improvement: {first} -> {last}");
        assert!(last < 3.0, "final expected social cost {last}");
    }

    #[test]
    fn gd_rejects_bad_parameters() {
        let g = crate::scenarios::make_prisoners_dilemma();
        let phi = NetworkSet::individual(2).unwrap();
        let bad = GdConfig { gamma: -1.0, ..Default::default() };
        assert!(gradient_descent(&g, &SocialCost::SumOfPlayerCosts, &phi, &bad).is_err());
        let bad_lambda = EntropyNashConfig { lambda: 0.0, ..Default::default() };
        assert!(solve(&g, &bad_lambda).is_err());
    }
}
