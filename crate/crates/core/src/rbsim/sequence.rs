use alloc::vec::Vec;

use rand::Rng;

use crate::clifford::GateSet;
use crate::{Error, Result};

/// An RB sequence `g_1, ..., g_m` (indices into a [`GateSet`]) together with the
/// inversion gate `g_0 = (g_m ... g_1)^-1`, which is applied first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sequence {
    gates: Vec<usize>,
    inversion: usize,
}

fn product_index(gates: &[usize], group: &GateSet) -> usize {
    gates
        .iter()
        .fold(group.identity_index(), |acc, &g| group.product(g, acc))
}

impl Sequence {
    pub fn new(gates: Vec<usize>, group: &GateSet) -> Result<Self> {
        if gates.is_empty() {
            return Err(Error::InvalidParameter("sequence length must be >= 1".into()));
        }
        if let Some(&bad) = gates.iter().find(|&&g| g >= group.len()) {
            return Err(Error::InvalidParameter(alloc::format!(
                "gate index {bad} out of range for a group of {}",
                group.len()
            )));
        }
        let inversion = group.inverse(product_index(&gates, group));
        Ok(Self { gates, inversion })
    }

    /// `g_1, ..., g_m`.
    pub fn gates(&self) -> &[usize] {
        &self.gates
    }

    pub fn inversion(&self) -> usize {
        self.inversion
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Index of `g_m ... g_1 g_0`; the identity for a well-formed sequence.
    pub fn net_gate(&self, group: &GateSet) -> usize {
        group.product(product_index(&self.gates, group), self.inversion)
    }

    /// Interleaved variant: every `g_t` becomes `g_int g_t` and the inversion is
    /// recomputed.
    pub fn interleave(&self, g_int: usize, group: &GateSet) -> Result<Self> {
        if g_int >= group.len() {
            return Err(Error::InvalidParameter(alloc::format!(
                "interleaved gate index {g_int} out of range"
            )));
        }
        Self::new(
            self.gates.iter().map(|&g| group.product(g_int, g)).collect(),
            group,
        )
    }
}

/// Draws `m` gates uniformly and independently.
pub fn sample_sequence<R: Rng + ?Sized>(m: usize, group: &GateSet, rng: &mut R) -> Result<Sequence> {
    if m == 0 {
        return Err(Error::InvalidParameter("sequence length must be >= 1".into()));
    }
    let n = group.len();
    Sequence::new((0..m).map(|_| rng.random_range(0..n)).collect(), group)
}
