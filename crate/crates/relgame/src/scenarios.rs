//! Game families used by the experiment harness: a congestion-style
//! traffic game with one carpool route, and a prisoner's dilemma in costs.

use crate::game::{MixedProfile, StaticGame, Tensor};
use crate::{Error, Result};

/// Congestion coefficients for the non-carpool routes, in route order.
pub const DEFAULT_COEFFS: [f64; 5] = [1.5, 2.0, 4.0, 4.5, 5.0];

/// Total cost C of the carpool route, shared evenly among its users.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CarpoolTotal {
    /// C = 5n/3; consistent with the reference optimum of 5n/3.
    TableConsistent,
    /// C = 2.5n.
    TextStated,
    Fixed(f64),
}

impl CarpoolTotal {
    pub fn value(&self, n: usize) -> f64 {
        match self {
            CarpoolTotal::TableConsistent => 5.0 * n as f64 / 3.0,
            CarpoolTotal::TextStated => 2.5 * n as f64,
            CarpoolTotal::Fixed(c) => *c,
        }
    }
}

/// Builds the traffic game: each of `n` players picks one of `num_routes`
/// routes. Route 1 is the carpool, costing C / (number of users) to each
/// user; route r > 1 costs coeffs[r−2] · (number of users) to each user.
pub fn make_traffic_game(
    n: usize,
    num_routes: usize,
    carpool: CarpoolTotal,
    coeffs: &[f64],
) -> Result<StaticGame> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 players, got {n}")));
    }
    if num_routes < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 routes, got {num_routes}")));
    }
    if coeffs.len() < num_routes - 1 {
        return Err(Error::InvalidArgument(format!(
            "{num_routes} routes need {} congestion coefficients, got {}",
            num_routes - 1,
            coeffs.len()
        )));
    }
    let c_total = carpool.value(n);
    let shape = vec![num_routes; n];
    let size: usize = shape.iter().product();
    let mut tensors: Vec<Tensor> = (0..n).map(|_| Tensor::zeros(shape.clone())).collect();
    let mut idx = vec![0usize; n];
    let mut loads = vec![0usize; num_routes];
    let decoder = Tensor::zeros(shape.clone());
    for flat in 0..size {
        decoder.decode(flat, &mut idx);
        loads.iter_mut().for_each(|l| *l = 0);
        for &r in &idx {
            loads[r] += 1;
        }
        for i in 0..n {
            let r = idx[i];
            let cost = if r == 0 {
                c_total / loads[0] as f64
            } else {
                coeffs[r - 1] * loads[r] as f64
            };
            tensors[i].data_mut()[flat] = cost;
        }
    }
    let labels: Vec<String> = (0..num_routes)
        .map(|r| if r == 0 { "A".to_string() } else { format!("R{}", r + 1) })
        .collect();
    StaticGame::new(tensors)?.with_labels(vec![labels; n])
}

/// The two-route traffic game with C = 5n/3 and congestion coefficient 1.5.
pub fn default_traffic_game(n: usize) -> Result<StaticGame> {
    make_traffic_game(n, 2, CarpoolTotal::TableConsistent, &DEFAULT_COEFFS)
}

/// Prisoner's dilemma in costs. Strategy 1 cooperates, strategy 2 defects:
/// (C,C) = (1,1), (D,D) = (2,2), (C,D) = (3,0), (D,C) = (0,3).
pub fn make_prisoners_dilemma() -> StaticGame {
    let a = Tensor::new(vec![2, 2], vec![1.0, 3.0, 0.0, 2.0]).unwrap();
    let b = Tensor::new(vec![2, 2], vec![1.0, 0.0, 3.0, 2.0]).unwrap();
    StaticGame::new(vec![a, b])
        .unwrap()
        .with_labels(vec![vec!["C".into(), "D".into()]; 2])
        .unwrap()
}

/// n-player social dilemma in costs. Strategy 1 cooperates at personal
/// cost `c`; every defector inflicts `b` on each other player. Defection
/// strictly dominates, so the unique Nash is all-defect, while all-cooperate
/// is the social optimum whenever c < b(n−1).
pub fn make_social_dilemma(n: usize, c: f64, b: f64) -> Result<StaticGame> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 players, got {n}")));
    }
    if !(c > 0.0) || !(b > 0.0) || c >= b * (n - 1) as f64 {
        return Err(Error::InvalidArgument(format!(
            "need 0 < c < b(n−1) for a dilemma, got c = {c}, b = {b}"
        )));
    }
    let shape = vec![2usize; n];
    let size = 1usize << n;
    let mut tensors: Vec<Tensor> = (0..n).map(|_| Tensor::zeros(shape.clone())).collect();
    let mut idx = vec![0usize; n];
    let decoder = Tensor::zeros(shape.clone());
    for flat in 0..size {
        decoder.decode(flat, &mut idx);
        let defectors: usize = idx.iter().sum();
        for i in 0..n {
            let others = defectors - idx[i];
            tensors[i].data_mut()[flat] =
                if idx[i] == 0 { c } else { 0.0 } + b * others as f64;
        }
    }
    StaticGame::new(tensors)?.with_labels(vec![vec!["C".into(), "D".into()]; n])
}

/// Dilemma instance used by the runtime scaling study: c = 2, b = 3.
pub fn default_social_dilemma(n: usize) -> Result<StaticGame> {
    make_social_dilemma(n, 2.0, 3.0)
}

fn binomial(n: usize, k: usize) -> f64 {
    let mut v = 1.0;
    for i in 0..k {
        v *= (n - i) as f64 / (i + 1) as f64;
    }
    v
}

/// Finds the symmetric interior mixed Nash of the two-route traffic game:
/// every player carpools with probability p, where p makes each player
/// indifferent between the routes against the binomial load of the others.
/// Returns the smallest such p as a mixed profile. Bisection on the
/// indifference gap, bracketed by the first sign change on a fine grid.
pub fn symmetric_traffic_mixed_nash(
    n: usize,
    carpool: CarpoolTotal,
    coeff: f64,
) -> Result<MixedProfile> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 players, got {n}")));
    }
    let c_total = carpool.value(n);
    // gap(p) = E[cost of carpool] − E[cost of the congested route], both
    // conditioned on joining that route against K ~ Bin(n−1, p) carpoolers
    let gap = |p: f64| {
        let mut carpool_cost = 0.0;
        for k in 0..n {
            carpool_cost +=
                binomial(n - 1, k) * p.powi(k as i32) * (1.0 - p).powi((n - 1 - k) as i32)
                    * c_total
                    / (k + 1) as f64;
        }
        let congested = coeff * (1.0 + (n - 1) as f64 * (1.0 - p));
        carpool_cost - congested
    };

    const GRID: usize = 1000;
    let mut lo = None;
    let mut prev = gap(0.0);
    for step in 1..=GRID {
        let p = step as f64 / GRID as f64;
        let g = gap(p);
        if prev == 0.0 || prev.signum() != g.signum() {
            lo = Some(((step - 1) as f64 / GRID as f64, p));
            break;
        }
        prev = g;
    }
    let (mut lo, mut hi) = lo.ok_or_else(|| {
        Error::NoInteriorEquilibrium(format!(
            "indifference gap has no sign change on (0,1) for n = {n}, coeff = {coeff}"
        ))
    })?;
    let sign_lo = gap(lo).signum();
    while hi - lo > 1e-15 && gap(0.5 * (lo + hi)).abs() > 1e-9 {
        let mid = 0.5 * (lo + hi);
        if gap(mid).signum() == sign_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let p = 0.5 * (lo + hi);
    MixedProfile::new(vec![vec![p, 1.0 - p]; n])
}
