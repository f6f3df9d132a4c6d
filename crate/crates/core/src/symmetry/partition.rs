use std::fmt;

use crate::error::{Error, Result};

/// A weakly decreasing tuple of non-negative integers, padded with zeros to a
/// fixed number of rows. Labels irreps of both `S_N` and `SU(d)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidInput(format!(
                "partition parts must be weakly decreasing: {parts:?}"
            )));
        }
        Ok(Self { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// The integer `N` being partitioned.
    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of nonzero rows.
    pub fn height(&self) -> usize {
        self.parts.iter().take_while(|&&p| p > 0).count()
    }

    /// Twice the total angular momentum `2J = y1 - y2` of a two-row diagram.
    pub fn twice_spin(&self) -> Option<usize> {
        match self.parts.as_slice() {
            [a] => Some(*a),
            [a, b] => Some(a - b),
            [a, b, rest @ ..] if rest.iter().all(|&x| x == 0) => Some(a - b),
            _ => None,
        }
    }

    /// Two-row diagram of `n` boxes with `2J = twice_spin`.
    pub fn from_spin(n: usize, twice_spin: usize) -> Result<Self> {
        if twice_spin > n || !(n - twice_spin).is_multiple_of(2) {
            return Err(Error::InvalidInput(format!(
                "2J = {twice_spin} incompatible with {n} qubits"
            )));
        }
        let y2 = (n - twice_spin) / 2;
        Self::new(vec![y2 + twice_spin, y2])
    }

    /// Hook length of box `(row, col)`.
    fn hook(&self, row: usize, col: usize) -> usize {
        let arm = self.parts[row] - col - 1;
        let leg = self.parts[row + 1..].iter().filter(|&&p| p > col).count();
        arm + leg + 1
    }

    fn boxes(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(i, &len)| (0..len).map(move |j| (i, j)))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// All partitions of `n` into at most `d` parts, zero-padded to length `d`,
/// in lexicographically descending order.
pub fn partitions(n: usize, d: usize) -> Vec<Partition> {
    fn rec(remaining: usize, max_part: usize, slots: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if slots == 0 {
            if remaining == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        // The remaining slots can hold at most `slots * max_part` boxes.
        if remaining > slots * max_part {
            return;
        }
        for part in (0..=max_part.min(remaining)).rev() {
            prefix.push(part);
            rec(remaining - part, part, slots - 1, prefix, out);
            prefix.pop();
        }
    }
    if d == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    rec(n, n, d, &mut Vec::with_capacity(d), &mut out);
    out.into_iter().map(|parts| Partition { parts }).collect()
}

pub(crate) fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Dimension of the symmetric-group irrep (hook-length formula).
pub fn dim_sn(y: &Partition) -> u128 {
    let hooks: u128 = y.boxes().map(|(i, j)| y.hook(i, j) as u128).product();
    factorial(y.size()) / hooks
}

/// Dimension of the `SU(d)` irrep (hook-content formula); zero when the
/// diagram has more than `d` rows.
pub fn dim_sud(y: &Partition, d: usize) -> u128 {
    if y.height() > d {
        return 0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for (i, j) in y.boxes() {
        num *= (d + j - i) as u128;
        den *= y.hook(i, j) as u128;
    }
    num / den
}

/// Dimension `binom(n + d - 1, n)` of the symmetric subspace of `n` qudits.
pub fn sym_dim(n: usize, d: usize) -> u128 {
    binomial(n + d - 1, n)
}
