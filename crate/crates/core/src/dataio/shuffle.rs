use crate::dataio::rng::SeededRng;
use crate::error::{Error, Result};

/// A bijection on `[0, n)` giving the order instances are visited in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    order: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self {
            order: (0..n).collect(),
        }
    }

    /// Wraps an explicit order, rejecting anything that is not a bijection.
    pub fn from_order(order: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; order.len()];
        for &i in &order {
            if i >= order.len() || seen[i] {
                return Err(Error::Config(format!("not a permutation: index {i}")));
            }
            seen[i] = true;
        }
        Ok(Self { order })
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.order.iter().copied()
    }
}

/// Fisher-Yates shuffle of `0..n`: for `i = n-1` down to `1`, swap slot `i`
/// with slot `below(i + 1)` drawn from [`SeededRng`] seeded with `seed`.
pub fn shuffle(n: usize, seed: u64) -> Result<Permutation> {
    if n == 0 {
        return Err(Error::Empty("permutation length"));
    }
    let mut rng = SeededRng::new(seed);
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.below(i as u64 + 1) as usize;
        order.swap(i, j);
    }
    Ok(Permutation { order })
}
