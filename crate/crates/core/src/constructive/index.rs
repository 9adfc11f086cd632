use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite prefix of the sequence `(p_n, q_n)`. The unbounded growth of
/// `p_n` is checked per request: asking for a degree beyond the largest `p`
/// fails with [`Error::IndexExhausted`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(usize, usize)>", into = "Vec<(usize, usize)>")]
pub struct IndexSequence {
    pairs: Vec<(usize, usize)>,
}

impl TryFrom<Vec<(usize, usize)>> for IndexSequence {
    type Error = Error;

    fn try_from(pairs: Vec<(usize, usize)>) -> Result<Self> {
        IndexSequence::new(pairs)
    }
}

impl From<IndexSequence> for Vec<(usize, usize)> {
    fn from(s: IndexSequence) -> Self {
        s.pairs
    }
}

impl IndexSequence {
    pub fn new(pairs: Vec<(usize, usize)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::InvalidArgument("index sequence is empty".into()));
        }
        Ok(Self { pairs })
    }

    /// `{(k, k mod modulus) : 0 <= k <= max_p}`.
    pub fn modular(max_p: usize, modulus: usize) -> Self {
        Self {
            pairs: (0..=max_p).map(|k| (k, k % modulus.max(1))).collect(),
        }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn max_p(&self) -> usize {
        self.pairs.iter().map(|&(p, _)| p).max().unwrap_or(0)
    }

    /// Every pair with `p > min_degree`, in sequence order, with its position.
    pub fn admissible(&self, min_degree: usize) -> impl Iterator<Item = (usize, (usize, usize))> + '_ {
        self.pairs
            .iter()
            .copied()
            .enumerate()
            .filter(move |&(_, (p, _))| p > min_degree)
    }
}

/// First pair (in sequence order) with `p > min_degree`.
pub fn select_index(f: &IndexSequence, min_degree: usize) -> Result<(usize, usize)> {
    f.admissible(min_degree)
        .map(|(_, pair)| pair)
        .next()
        .ok_or(Error::IndexExhausted {
            min_degree,
            max_p: f.max_p(),
        })
}
