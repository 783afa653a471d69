//! Identification sets.
//!
//! A set of input states identifies a unitary (up to phase) iff its transition
//! graph is connected and the states span the space. Minimal such sets are
//! exactly the connected bases.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::matkernel::{numerical_rank, CVector};
use crate::{tol, Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct StateSet {
    pub states: Vec<CVector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl StateSet {
    pub fn new(states: Vec<CVector>) -> Result<Self> {
        let Some(first) = states.first() else {
            return Err(Error::InvalidArgument("empty state set".into()));
        };
        let d = first.dim();
        for s in &states {
            if s.dim() != d {
                return Err(Error::DimensionMismatch("states of unequal dimension".into()));
            }
            if !s.is_normalized(tol::STATE_NORM) {
                return Err(Error::NotNormalized(s.norm()));
            }
        }
        Ok(StateSet { states, labels: None })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.states.len() {
            return Err(Error::InvalidArgument("one label per state required".into()));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn label(&self, i: usize) -> Option<&str> {
        self.labels.as_ref().map(|l| l[i].as_str())
    }

    fn subset(&self, idx: &[usize]) -> StateSet {
        StateSet {
            states: idx.iter().map(|&i| self.states[i].clone()).collect(),
            labels: self.labels.as_ref().map(|l| idx.iter().map(|&i| l[i].clone()).collect()),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TransitionGraph {
    pub n: usize,
    pub adjacency: Vec<Vec<bool>>,
    pub overlap_tolerance: f64,
}

impl TransitionGraph {
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.adjacency[i][j] {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn degree(&self, v: usize) -> usize {
        (0..self.n).filter(|&u| u != v && self.adjacency[v][u]).count()
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return false;
        }
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for u in 0..self.n {
                if !seen[u] && self.adjacency[v][u] {
                    seen[u] = true;
                    count += 1;
                    queue.push_back(u);
                }
            }
        }
        count == self.n
    }
}

/// Edge `(j, k)` iff `|⟨ψ_j|ψ_k⟩| > tol`.
pub fn transition_graph(set: &StateSet, tol: f64) -> TransitionGraph {
    let n = set.len();
    let mut adjacency = vec![vec![false; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let edge = set.states[i].inner(&set.states[j]).norm() > tol;
            adjacency[i][j] = edge;
            adjacency[j][i] = edge;
        }
    }
    TransitionGraph {
        n,
        adjacency,
        overlap_tolerance: tol,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Coverage {
    pub connected: bool,
    pub spanning: bool,
}

impl Coverage {
    pub fn is_identification_set(self) -> bool {
        self.connected && self.spanning
    }
}

pub fn is_connected_spanning(set: &StateSet) -> Result<Coverage> {
    is_connected_spanning_with(set, tol::OVERLAP, tol::RANK)
}

pub fn is_connected_spanning_with(set: &StateSet, overlap_tol: f64, rank_tol: f64) -> Result<Coverage> {
    Ok(Coverage {
        connected: transition_graph(set, overlap_tol).is_connected(),
        spanning: numerical_rank(&set.states, rank_tol)? == set.dim(),
    })
}

/// Greedily grows a maximal connected linearly independent subset.
///
/// Scans the input in order and adds the first state that raises the rank and
/// overlaps a state already chosen, then rescans from the start.
pub fn extract_connected_basis(set: &StateSet) -> Result<StateSet> {
    if !is_connected_spanning(set)?.is_identification_set() {
        return Err(Error::NotConnectedSpanning);
    }
    let d = set.dim();
    let mut chosen = vec![0usize];
    while chosen.len() < d {
        let mut added = false;
        for i in 0..set.len() {
            if chosen.contains(&i) {
                continue;
            }
            let overlaps = chosen
                .iter()
                .any(|&j| set.states[i].inner(&set.states[j]).norm() > tol::OVERLAP);
            if !overlaps {
                continue;
            }
            let mut trial: Vec<CVector> = chosen.iter().map(|&j| set.states[j].clone()).collect();
            trial.push(set.states[i].clone());
            if numerical_rank(&trial, tol::RANK)? == trial.len() {
                chosen.push(i);
                added = true;
                break;
            }
        }
        if !added {
            return Err(Error::NotConnectedSpanning);
        }
    }
    chosen.sort_unstable();
    Ok(set.subset(&chosen))
}

/// `{|1⟩, …, |d−1⟩, |φ⟩}` with `|φ⟩` the uniform superposition.
pub fn standard_mis(d: usize) -> Result<StateSet> {
    if d == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    let phi = CVector::from_real(&vec![1.0 / (d as f64).sqrt(); d]);
    let mut states: Vec<CVector> = (1..d).map(|j| CVector::basis(d, j)).collect();
    let mut labels: Vec<String> = (1..d).map(|j| format!("|{j}>")).collect();
    states.push(phi);
    labels.push("|phi>".into());
    StateSet::new(states)?.with_labels(labels)
}
