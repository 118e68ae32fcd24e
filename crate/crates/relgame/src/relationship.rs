//! Relationship networks and the cost-modification function.
//!
//! A network set is an ordered list of m real n×n adjacency matrices with
//! zero diagonal; a weight vector assigns one coefficient per network.
//! Ordering conventions are frozen because weights are positional: for the
//! individual type, ordered pairs run (1,2),(1,3),…,(1,n),(2,1),… so that a
//! weight vector like `[0.2, 0, 0, 0.2, 0.2, 0]` on three players means the
//! cyclic relations (1→2), (2→3), (3→1).

use crate::game::StaticGame;
#[cfg(test)]
use crate::game::Tensor;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelationshipType {
    Individual,
    AllPeople,
    Reciprocity,
    Custom,
}

impl std::fmt::Display for RelationshipType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            RelationshipType::Individual => "individual",
            RelationshipType::AllPeople => "all_people",
            RelationshipType::Reciprocity => "reciprocity",
            RelationshipType::Custom => "custom",
        };
        f.write_str(s)
    }
}

/// Ordered set of n×n relationship networks (row-major matrices).
#[derive(Debug, Clone)]
pub struct NetworkSet {
    num_players: usize,
    networks: Vec<Vec<f64>>,
    tag: RelationshipType,
}

impl NetworkSet {
    /// One network per ordered pair (i, j), i ≠ j, a single 1 at (i, j).
    pub fn individual(n: usize) -> Result<Self> {
        check_n(n)?;
        let mut networks = Vec::with_capacity(n * (n - 1));
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    let mut m = vec![0.0; n * n];
                    m[i * n + j] = 1.0;
                    networks.push(m);
                }
            }
        }
        Ok(Self { num_players: n, networks, tag: RelationshipType::Individual })
    }

    /// One network per player i: 1 in every off-diagonal entry of row i.
    pub fn all_people(n: usize) -> Result<Self> {
        check_n(n)?;
        let mut networks = Vec::with_capacity(n);
        for i in 0..n {
            let mut m = vec![0.0; n * n];
            for j in 0..n {
                if j != i {
                    m[i * n + j] = 1.0;
                }
            }
            networks.push(m);
        }
        Ok(Self { num_players: n, networks, tag: RelationshipType::AllPeople })
    }

    /// One symmetric network per unordered pair {i, j}, i < j, lexicographic.
    pub fn reciprocity(n: usize) -> Result<Self> {
        check_n(n)?;
        let mut networks = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in (i + 1)..n {
                let mut m = vec![0.0; n * n];
                m[i * n + j] = 1.0;
                m[j * n + i] = 1.0;
                networks.push(m);
            }
        }
        Ok(Self { num_players: n, networks, tag: RelationshipType::Reciprocity })
    }

    /// Caller-supplied matrices; the zero diagonal is validated.
    pub fn custom(n: usize, networks: Vec<Vec<f64>>) -> Result<Self> {
        check_n(n)?;
        if networks.is_empty() {
            return Err(Error::InvalidArgument("network set must contain at least one network".into()));
        }
        for (r, m) in networks.iter().enumerate() {
            if m.len() != n * n {
                return Err(Error::ShapeMismatch(format!(
                    "network {} has {} entries, expected {}×{}",
                    r + 1,
                    m.len(),
                    n,
                    n
                )));
            }
            if m.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidArgument(format!("network {} has a non-finite entry", r + 1)));
            }
            for i in 0..n {
                if m[i * n + i] != 0.0 {
                    return Err(Error::InvalidArgument(format!(
                        "network {} has nonzero diagonal at ({}, {})",
                        r + 1,
                        i + 1,
                        i + 1
                    )));
                }
            }
        }
        Ok(Self { num_players: n, networks, tag: RelationshipType::Custom })
    }

    pub fn by_type(tag: RelationshipType, n: usize) -> Result<Self> {
        match tag {
            RelationshipType::Individual => Self::individual(n),
            RelationshipType::AllPeople => Self::all_people(n),
            RelationshipType::Reciprocity => Self::reciprocity(n),
            RelationshipType::Custom => {
                Err(Error::InvalidArgument("custom network sets need explicit matrices".into()))
            }
        }
    }

    pub fn len(&self) -> usize {
        self.networks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.networks.is_empty()
    }

    pub fn num_players(&self) -> usize {
        self.num_players
    }

    pub fn tag(&self) -> RelationshipType {
        self.tag
    }

    /// Network r as an n×n row-major slice.
    pub fn network(&self, r: usize) -> &[f64] {
        &self.networks[r]
    }

    /// Aggregate matrix Σ_r w_r φ_r.
    pub fn aggregate(&self, w: &[f64]) -> Result<Vec<f64>> {
        self.check_weights(w)?;
        let n = self.num_players;
        let mut agg = vec![0.0; n * n];
        for (wr, net) in w.iter().zip(&self.networks) {
            if *wr == 0.0 {
                continue;
            }
            for (a, v) in agg.iter_mut().zip(net) {
                *a += wr * v;
            }
        }
        Ok(agg)
    }

    pub fn check_weights(&self, w: &[f64]) -> Result<()> {
        if w.len() != self.len() {
            return Err(Error::ShapeMismatch(format!(
                "weight vector has length {}, network set has {} networks",
                w.len(),
                self.len()
            )));
        }
        if w.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("weight vector has a non-finite entry".into()));
        }
        Ok(())
    }
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 players, got {n}")));
    }
    Ok(())
}

/// Applies the modification ũ^i(s) = u^i(s) + Σ_j (Σ_r w_r φ_r)_{ij} u^j(s).
/// The original game is untouched; strategy sets are unchanged.
pub fn modify_costs(g: &StaticGame, phi: &NetworkSet, w: &[f64]) -> Result<StaticGame> {
    if phi.num_players() != g.num_players() {
        return Err(Error::ShapeMismatch(format!(
            "network set is over {} players, game has {}",
            phi.num_players(),
            g.num_players()
        )));
    }
    let agg = phi.aggregate(w)?;
    let n = g.num_players();
    let mut tensors = Vec::with_capacity(n);
    for i in 0..n {
        let mut t = g.cost_tensor(i).clone();
        for j in 0..n {
            let a = agg[i * n + j];
            if a == 0.0 {
                continue;
            }
            let uj = g.cost_tensor(j);
            for (dst, &src) in t.data_mut().iter_mut().zip(uj.data()) {
                *dst += a * src;
            }
        }
        tensors.push(t);
    }
    let modified = StaticGame::new(tensors)?;
    match g.strategy_labels() {
        Some(labels) => modified.with_labels(labels.to_vec()),
        None => Ok(modified),
    }
}

/// Per-network modification direction for player i: the tensor
/// ∂ũ^i/∂w_r = Σ_j (φ_r)_{ij} u^j.
#[cfg(test)]
pub(crate) fn modification_direction(g: &StaticGame, phi: &NetworkSet, r: usize, i: usize) -> Tensor {
    let n = g.num_players();
    let net = phi.network(r);
    let mut t = Tensor::zeros(g.strategy_counts().to_vec());
    for j in 0..n {
        let a = net[i * n + j];
        if a == 0.0 {
            continue;
        }
        for (dst, &src) in t.data_mut().iter_mut().zip(g.cost_tensor(j).data()) {
            *dst += a * src;
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::Tensor;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn individual_counts() {
        assert_eq!(NetworkSet::individual(3).unwrap().len(), 6);
        assert_eq!(NetworkSet::individual(2).unwrap().len(), 2);
        assert_eq!(NetworkSet::individual(4).unwrap().len(), 12);
    }

    #[test]
    fn individual_ordering_is_lexicographic() {
        let phi = NetworkSet::individual(3).unwrap();
        // (1,2),(1,3),(2,1),(2,3),(3,1),(3,2)
        let pairs = [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)];
        for (r, (i, j)) in pairs.iter().enumerate() {
            let m = phi.network(r);
            assert_eq!(m[i * 3 + j], 1.0);
            assert_eq!(m.iter().sum::<f64>(), 1.0);
        }
    }

    #[test]
    fn all_people_row_sums() {
        for n in 2..=6 {
            let phi = NetworkSet::all_people(n).unwrap();
            assert_eq!(phi.len(), n);
            for (i, m) in (0..n).map(|i| (i, phi.network(i))) {
                for row in 0..n {
                    let sum: f64 = m[row * n..(row + 1) * n].iter().sum();
                    let expected = if row == i { (n - 1) as f64 } else { 0.0 };
                    assert_eq!(sum, expected);
                }
            }
        }
    }

    #[test]
    fn reciprocity_networks_are_symmetric() {
        for n in 2..=6 {
            let phi = NetworkSet::reciprocity(n).unwrap();
            assert_eq!(phi.len(), n * (n - 1) / 2);
            for r in 0..phi.len() {
                let m = phi.network(r);
                for i in 0..n {
                    for j in 0..n {
                        assert_eq!(m[i * n + j], m[j * n + i]);
                    }
                }
            }
        }
    }

    #[test]
    fn custom_rejects_nonzero_diagonal() {
        let mut m = vec![0.0; 4];
        m[0] = 1.0;
        let err = NetworkSet::custom(2, vec![m]).unwrap_err();
        assert!(err.to_string().contains("diagonal"));
    }

    fn random_game(rng: &mut ChaCha8Rng, counts: &[usize]) -> StaticGame {
        let len: usize = counts.iter().product();
        let tensors = (0..counts.len())
            .map(|_| {
                Tensor::new(counts.to_vec(), (0..len).map(|_| rng.gen_range(0.0..10.0)).collect())
                    .unwrap()
            })
            .collect();
        StaticGame::new(tensors).unwrap()
    }

    #[test]
    fn zero_weights_leave_costs_bitwise_unchanged() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let g = random_game(&mut rng, &[2, 2, 2]);
        let phi = NetworkSet::individual(3).unwrap();
        let modified = modify_costs(&g, &phi, &[0.0; 6]).unwrap();
        for i in 0..3 {
            assert_eq!(modified.cost_tensor(i).data(), g.cost_tensor(i).data());
        }
    }

    #[test]
    fn single_edge_modification_expands_by_hand() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let g = random_game(&mut rng, &[2, 3]);
        let mut m = vec![0.0; 4];
        m[0 * 2 + 1] = 1.0; // edge 1 -> 2
        let phi = NetworkSet::custom(2, vec![m]).unwrap();
        let c = 0.37;
        let modified = modify_costs(&g, &phi, &[c]).unwrap();
        for (idx, (&u1, &u2)) in
            g.cost_tensor(0).data().iter().zip(g.cost_tensor(1).data()).enumerate()
        {
            assert!((modified.cost_tensor(0).data()[idx] - (u1 + c * u2)).abs() < 1e-12);
        }
        assert_eq!(modified.cost_tensor(1).data(), g.cost_tensor(1).data());
    }

    #[test]
    fn modification_is_linear_in_w() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let g = random_game(&mut rng, &[2, 2, 2]);
        let phi = NetworkSet::reciprocity(3).unwrap();
        let w1 = [0.3, -0.2, 0.1];
        let w2 = [0.05, 0.4, -0.3];
        let sum: Vec<f64> = w1.iter().zip(&w2).map(|(a, b)| a + b).collect();
        let m1 = modify_costs(&g, &phi, &w1).unwrap();
        let m2 = modify_costs(&g, &phi, &w2).unwrap();
        let ms = modify_costs(&g, &phi, &sum).unwrap();
        for i in 0..3 {
            for ((&a, &b), (&s, &u)) in m1
                .cost_tensor(i)
                .data()
                .iter()
                .zip(m2.cost_tensor(i).data())
                .zip(ms.cost_tensor(i).data().iter().zip(g.cost_tensor(i).data()))
            {
                assert!((s - (a + b - u)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn reciprocity_span_inside_individual_span() {
        // A reciprocity modification is reproduced by the individual set with
        // paired equal weights.
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let g = random_game(&mut rng, &[2, 2, 2]);
        let rec = NetworkSet::reciprocity(3).unwrap();
        let ind = NetworkSet::individual(3).unwrap();
        let w_rec = [0.25, -0.4, 0.15]; // pairs {1,2}, {1,3}, {2,3}
        // individual order: (1,2),(1,3),(2,1),(2,3),(3,1),(3,2)
        let w_ind = [0.25, -0.4, 0.25, 0.15, -0.4, 0.15];
        let a = modify_costs(&g, &rec, &w_rec).unwrap();
        let b = modify_costs(&g, &ind, &w_ind).unwrap();
        for i in 0..3 {
            for (&x, &y) in a.cost_tensor(i).data().iter().zip(b.cost_tensor(i).data()) {
                assert!((x - y).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let g = random_game(&mut rng, &[2, 2]);
        let phi = NetworkSet::individual(3).unwrap();
        assert!(modify_costs(&g, &phi, &[0.0; 6]).is_err());
        let phi2 = NetworkSet::individual(2).unwrap();
        assert!(modify_costs(&g, &phi2, &[0.0; 3]).is_err());
    }
}
