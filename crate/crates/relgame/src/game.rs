//! Finite n-player static cost games: expected costs, social costs, and the
//! pure-Nash oracle.
//!
//! Strategy indices are 0-based everywhere inside the crate; the paper-style
//! 1-based convention appears only at I/O boundaries (see
//! [`PureProfile::from_one_based`]).

use crate::{Error, Result};

/// Guard on exhaustive profile enumeration.
pub const PROFILE_GUARD: usize = 10_000_000;

/// Probability vectors must sum to 1 within this tolerance; inputs outside
/// it are rejected, never renormalized.
pub const PROB_SUM_TOL: f64 = 1e-9;

/// Dense real tensor over joint pure-strategy profiles, row-major with the
/// player-1 index outermost.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    shape: Vec<usize>,
    data: Vec<f64>,
}

impl Tensor {
    pub fn new(shape: Vec<usize>, data: Vec<f64>) -> Result<Self> {
        let expected: usize = shape.iter().product();
        if shape.iter().any(|&d| d == 0) {
            return Err(Error::InvalidArgument("tensor dimensions must be positive".into()));
        }
        if data.len() != expected {
            return Err(Error::ShapeMismatch(format!(
                "tensor data length {} does not match shape {:?} (expected {})",
                data.len(),
                shape,
                expected
            )));
        }
        if let Some(v) = data.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite tensor entry {v}")));
        }
        Ok(Self { shape, data })
    }

    pub fn zeros(shape: Vec<usize>) -> Self {
        let len = shape.iter().product();
        Self { shape, data: vec![0.0; len] }
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn num_entries(&self) -> usize {
        self.data.len()
    }

    /// Flat index of a 0-based profile.
    pub fn flat_index(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.shape.len());
        let mut flat = 0;
        for (d, &i) in idx.iter().enumerate() {
            debug_assert!(i < self.shape[d]);
            flat = flat * self.shape[d] + i;
        }
        flat
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.data[self.flat_index(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: f64) {
        let flat = self.flat_index(idx);
        self.data[flat] = v;
    }

    /// Decodes a flat index into per-player digits.
    pub fn decode(&self, mut flat: usize, out: &mut [usize]) {
        for d in (0..self.shape.len()).rev() {
            out[d] = flat % self.shape[d];
            flat /= self.shape[d];
        }
    }
}

/// Iterator over all 0-based profiles of a shape, in row-major order.
pub fn profiles(shape: &[usize]) -> ProfileIter {
    ProfileIter { shape: shape.to_vec(), next: Some(vec![0; shape.len()]) }
}

pub struct ProfileIter {
    shape: Vec<usize>,
    next: Option<Vec<usize>>,
}

impl Iterator for ProfileIter {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        for d in (0..self.shape.len()).rev() {
            succ[d] += 1;
            if succ[d] < self.shape[d] {
                self.next = Some(succ);
                return Some(current);
            }
            succ[d] = 0;
        }
        Some(current)
    }
}

/// An n-player static game: per-player cost tensors over joint profiles.
#[derive(Debug, Clone)]
pub struct StaticGame {
    strategy_counts: Vec<usize>,
    strategy_labels: Option<Vec<Vec<String>>>,
    cost_tensors: Vec<Tensor>,
}

impl StaticGame {
    pub fn new(cost_tensors: Vec<Tensor>) -> Result<Self> {
        let n = cost_tensors.len();
        if n < 2 {
            return Err(Error::InvalidArgument(format!("need at least 2 players, got {n}")));
        }
        let counts = cost_tensors[0].shape().to_vec();
        if counts.len() != n {
            return Err(Error::ShapeMismatch(format!(
                "{} cost tensors but tensors have {} dimensions",
                n,
                counts.len()
            )));
        }
        for (i, t) in cost_tensors.iter().enumerate() {
            if t.shape() != counts.as_slice() {
                return Err(Error::ShapeMismatch(format!(
                    "cost tensor for player {} has shape {:?}, expected {:?}",
                    i + 1,
                    t.shape(),
                    counts
                )));
            }
        }
        Ok(Self { strategy_counts: counts, strategy_labels: None, cost_tensors })
    }

    pub fn with_labels(mut self, labels: Vec<Vec<String>>) -> Result<Self> {
        if labels.len() != self.num_players() {
            return Err(Error::ShapeMismatch(format!(
                "{} label lists for {} players",
                labels.len(),
                self.num_players()
            )));
        }
        for (i, (l, &c)) in labels.iter().zip(&self.strategy_counts).enumerate() {
            if l.len() != c {
                return Err(Error::ShapeMismatch(format!(
                    "player {} has {} labels for {} strategies",
                    i + 1,
                    l.len(),
                    c
                )));
            }
        }
        self.strategy_labels = Some(labels);
        Ok(self)
    }

    pub fn num_players(&self) -> usize {
        self.strategy_counts.len()
    }

    pub fn strategy_counts(&self) -> &[usize] {
        &self.strategy_counts
    }

    pub fn strategy_labels(&self) -> Option<&[Vec<String>]> {
        self.strategy_labels.as_deref()
    }

    pub fn cost_tensor(&self, player: usize) -> &Tensor {
        &self.cost_tensors[player]
    }

    pub fn cost_tensors(&self) -> &[Tensor] {
        &self.cost_tensors
    }

    pub fn num_profiles(&self) -> usize {
        self.strategy_counts.iter().product()
    }

    fn check_guard(&self) -> Result<()> {
        let total = self.num_profiles();
        if total > PROFILE_GUARD {
            return Err(Error::ProfileGuard(total, PROFILE_GUARD));
        }
        Ok(())
    }
}

/// One pure strategy per player, stored 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PureProfile(Vec<usize>);

impl PureProfile {
    pub fn from_zero_based(choices: Vec<usize>) -> Self {
        Self(choices)
    }

    /// Accepts the paper's 1-based convention, e.g. `[2, 1, 1, 1]`.
    pub fn from_one_based(choices: &[usize]) -> Result<Self> {
        if choices.iter().any(|&c| c == 0) {
            return Err(Error::InvalidArgument("1-based strategy index cannot be 0".into()));
        }
        Ok(Self(choices.iter().map(|&c| c - 1).collect()))
    }

    pub fn zero_based(&self) -> &[usize] {
        &self.0
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|&c| c + 1).collect()
    }

    pub fn validate(&self, g: &StaticGame) -> Result<()> {
        if self.0.len() != g.num_players() {
            return Err(Error::ShapeMismatch(format!(
                "profile has {} choices for {} players",
                self.0.len(),
                g.num_players()
            )));
        }
        for (i, (&c, &k)) in self.0.iter().zip(g.strategy_counts()).enumerate() {
            if c >= k {
                return Err(Error::InvalidArgument(format!(
                    "player {} choice {} out of range (|S| = {})",
                    i + 1,
                    c + 1,
                    k
                )));
            }
        }
        Ok(())
    }
}

/// One probability vector per player.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedProfile {
    distributions: Vec<Vec<f64>>,
}

impl MixedProfile {
    pub fn new(distributions: Vec<Vec<f64>>) -> Result<Self> {
        for (i, d) in distributions.iter().enumerate() {
            if d.is_empty() {
                return Err(Error::InvalidArgument(format!("player {} has empty distribution", i + 1)));
            }
            if d.iter().any(|&p| !(p >= 0.0) || !p.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "player {} distribution has a negative or non-finite entry",
                    i + 1
                )));
            }
            let sum: f64 = d.iter().sum();
            if (sum - 1.0).abs() > PROB_SUM_TOL {
                return Err(Error::InvalidArgument(format!(
                    "player {} distribution sums to {} (tolerance {})",
                    i + 1,
                    sum,
                    PROB_SUM_TOL
                )));
            }
        }
        Ok(Self { distributions })
    }

    pub fn point_mass(profile: &PureProfile, strategy_counts: &[usize]) -> Self {
        let distributions = profile
            .zero_based()
            .iter()
            .zip(strategy_counts)
            .map(|(&c, &k)| {
                let mut d = vec![0.0; k];
                d[c] = 1.0;
                d
            })
            .collect();
        Self { distributions }
    }

    pub fn uniform(strategy_counts: &[usize]) -> Self {
        let distributions =
            strategy_counts.iter().map(|&k| vec![1.0 / k as f64; k]).collect();
        Self { distributions }
    }

    pub fn distributions(&self) -> &[Vec<f64>] {
        &self.distributions
    }

    pub fn validate_for(&self, shape: &[usize]) -> Result<()> {
        if self.distributions.len() != shape.len() {
            return Err(Error::ShapeMismatch(format!(
                "profile has {} distributions for {} players",
                self.distributions.len(),
                shape.len()
            )));
        }
        for (i, (d, &k)) in self.distributions.iter().zip(shape).enumerate() {
            if d.len() != k {
                return Err(Error::ShapeMismatch(format!(
                    "player {} distribution has length {}, expected {}",
                    i + 1,
                    d.len(),
                    k
                )));
            }
        }
        Ok(())
    }
}

/// Social cost: sum of player costs, or an explicit tensor.
#[derive(Debug, Clone)]
pub enum SocialCost {
    SumOfPlayerCosts,
    Explicit(Tensor),
}

impl SocialCost {
    /// Materializes the social-cost tensor for a game.
    pub fn tensor(&self, g: &StaticGame) -> Result<Tensor> {
        match self {
            SocialCost::SumOfPlayerCosts => {
                let mut t = Tensor::zeros(g.strategy_counts().to_vec());
                for u in g.cost_tensors() {
                    for (acc, &v) in t.data.iter_mut().zip(u.data()) {
                        *acc += v;
                    }
                }
                Ok(t)
            }
            SocialCost::Explicit(t) => {
                if t.shape() != g.strategy_counts() {
                    return Err(Error::ShapeMismatch(format!(
                        "social cost tensor shape {:?} does not match game {:?}",
                        t.shape(),
                        g.strategy_counts()
                    )));
                }
                Ok(t.clone())
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Raw kernels over unvalidated distribution slices. Solver iterates may leave
// the simplex, so these take plain slices; the public API validates.
// ---------------------------------------------------------------------------

pub(crate) fn ec_raw(dists: &[Vec<f64>], t: &Tensor) -> f64 {
    let shape = t.shape();
    let mut idx = vec![0usize; shape.len()];
    let mut total = 0.0;
    for (flat, &v) in t.data().iter().enumerate() {
        t.decode(flat, &mut idx);
        let mut p = 1.0;
        for (j, &s) in idx.iter().enumerate() {
            p *= dists[j][s];
        }
        total += p * v;
    }
    total
}

/// Expected cost per pure strategy of player `i`, with the other players at
/// `dists` (player i's own entry is ignored).
pub(crate) fn ecv_raw(dists: &[Vec<f64>], t: &Tensor, i: usize) -> Vec<f64> {
    let shape = t.shape();
    let mut out = vec![0.0; shape[i]];
    let mut idx = vec![0usize; shape.len()];
    for (flat, &v) in t.data().iter().enumerate() {
        t.decode(flat, &mut idx);
        let mut p = 1.0;
        for (j, &s) in idx.iter().enumerate() {
            if j != i {
                p *= dists[j][s];
            }
        }
        out[idx[i]] += p * v;
    }
    out
}

/// Cross expected-cost matrix: entry (a, b) is the expected value of `t` with
/// player `i` at pure a, player `j` at pure b, everyone else at `dists`.
/// Reference implementation; the solver uses [`ecm_all_raw`].
#[cfg(test)]
pub(crate) fn ecm_raw(dists: &[Vec<f64>], t: &Tensor, i: usize, j: usize) -> Vec<Vec<f64>> {
    debug_assert_ne!(i, j);
    let shape = t.shape();
    let mut out = vec![vec![0.0; shape[j]]; shape[i]];
    let mut idx = vec![0usize; shape.len()];
    for (flat, &v) in t.data().iter().enumerate() {
        t.decode(flat, &mut idx);
        let mut p = 1.0;
        for (q, &s) in idx.iter().enumerate() {
            if q != i && q != j {
                p *= dists[q][s];
            }
        }
        out[idx[i]][idx[j]] += p * v;
    }
    out
}

/// [`ecv_raw`] for every player at once in a single pass, via prefix/suffix
/// probability products per profile.
pub(crate) fn ecv_all_raw(dists: &[Vec<f64>], t: &Tensor) -> Vec<Vec<f64>> {
    let shape = t.shape();
    let n = shape.len();
    let mut out: Vec<Vec<f64>> = shape.iter().map(|&k| vec![0.0; k]).collect();
    let mut idx = vec![0usize; n];
    let mut pre = vec![1.0; n + 1];
    let mut suf = vec![1.0; n + 1];
    for (flat, &v) in t.data().iter().enumerate() {
        t.decode(flat, &mut idx);
        for k in 0..n {
            pre[k + 1] = pre[k] * dists[k][idx[k]];
        }
        suf[n] = 1.0;
        for k in (0..n).rev() {
            suf[k] = suf[k + 1] * dists[k][idx[k]];
        }
        for i in 0..n {
            out[i][idx[i]] += pre[i] * suf[i + 1] * v;
        }
    }
    out
}

/// [`ecm_raw`] against every opponent of player `i` at once: entry `j` (for
/// j ≠ i) is the S_i × S_j cross matrix; entry `i` is empty.
pub(crate) fn ecm_all_raw(dists: &[Vec<f64>], t: &Tensor, i: usize) -> Vec<Vec<Vec<f64>>> {
    let shape = t.shape();
    let n = shape.len();
    let mut out: Vec<Vec<Vec<f64>>> = (0..n)
        .map(|j| if j == i { Vec::new() } else { vec![vec![0.0; shape[j]]; shape[i]] })
        .collect();
    let mut idx = vec![0usize; n];
    // prefix/suffix products over all players except i
    let mut pre = vec![1.0; n + 1];
    let mut suf = vec![1.0; n + 1];
    for (flat, &v) in t.data().iter().enumerate() {
        t.decode(flat, &mut idx);
        for k in 0..n {
            let p = if k == i { 1.0 } else { dists[k][idx[k]] };
            pre[k + 1] = pre[k] * p;
        }
        suf[n] = 1.0;
        for k in (0..n).rev() {
            let p = if k == i { 1.0 } else { dists[k][idx[k]] };
            suf[k] = suf[k + 1] * p;
        }
        for j in 0..n {
            if j != i {
                out[j][idx[i]][idx[j]] += pre[j] * suf[j + 1] * v;
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Public operations
// ---------------------------------------------------------------------------

/// Expected value of `t` under the product distribution `x` (Eq. of the
/// multilinear expectation over pure profiles).
pub fn expected_cost(x: &MixedProfile, t: &Tensor) -> Result<f64> {
    x.validate_for(t.shape())?;
    Ok(ec_raw(x.distributions(), t))
}

/// Vector of player `i`'s expected costs per pure strategy, given the other
/// players' mixed strategies. Contracting the result with any distribution
/// for player `i` reproduces [`expected_cost`].
pub fn expected_cost_vector(x: &MixedProfile, t: &Tensor, i: usize) -> Result<Vec<f64>> {
    x.validate_for(t.shape())?;
    if i >= t.shape().len() {
        return Err(Error::InvalidArgument(format!("player index {i} out of range")));
    }
    Ok(ecv_raw(x.distributions(), t, i))
}

/// Weak-inequality pure Nash test: no player can strictly improve by a
/// unilateral deviation; ties count as equilibrium.
pub fn is_pure_nash(g: &StaticGame, s: &PureProfile) -> Result<bool> {
    s.validate(g)?;
    let mut probe = s.zero_based().to_vec();
    for i in 0..g.num_players() {
        let u = g.cost_tensor(i);
        let here = u.get(s.zero_based());
        let original = probe[i];
        for dev in 0..g.strategy_counts()[i] {
            if dev == original {
                continue;
            }
            probe[i] = dev;
            if u.get(&probe) < here {
                probe[i] = original;
                return Ok(false);
            }
        }
        probe[i] = original;
    }
    Ok(true)
}

/// All pure Nash equilibria, by exhaustive enumeration (guarded).
pub fn enumerate_pure_nash(g: &StaticGame) -> Result<Vec<PureProfile>> {
    g.check_guard()?;
    let mut out = Vec::new();
    for p in profiles(g.strategy_counts()) {
        let profile = PureProfile::from_zero_based(p);
        if is_pure_nash(g, &profile)? {
            out.push(profile);
        }
    }
    Ok(out)
}

/// Social cost of a pure profile.
pub fn social_cost(g: &StaticGame, v: &SocialCost, s: &PureProfile) -> Result<f64> {
    s.validate(g)?;
    match v {
        SocialCost::SumOfPlayerCosts => {
            Ok(g.cost_tensors().iter().map(|t| t.get(s.zero_based())).sum())
        }
        SocialCost::Explicit(t) => {
            if t.shape() != g.strategy_counts() {
                return Err(Error::ShapeMismatch("social cost tensor shape mismatch".into()));
            }
            Ok(t.get(s.zero_based()))
        }
    }
}

/// Expected social cost of a mixed profile.
pub fn expected_social_cost(g: &StaticGame, v: &SocialCost, x: &MixedProfile) -> Result<f64> {
    let t = v.tensor(g)?;
    expected_cost(x, &t)
}

/// Profile minimizing the social cost; ties broken lexicographically
/// (smallest 0-based choice vector).
pub fn best_social_profile(g: &StaticGame, v: &SocialCost) -> Result<(PureProfile, f64)> {
    g.check_guard()?;
    let t = v.tensor(g)?;
    let mut best: Option<(Vec<usize>, f64)> = None;
    for p in profiles(g.strategy_counts()) {
        let value = t.get(&p);
        match &best {
            Some((_, bv)) if value >= *bv => {}
            _ => best = Some((p, value)),
        }
    }
    let (p, value) = best.expect("games have at least one profile");
    Ok((PureProfile::from_zero_based(p), value))
}
