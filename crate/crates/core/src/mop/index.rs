use std::fmt;

use crate::error::{Error, Result};

/// `(n_1, ..., n_r)`; directions are 0-based in the API and 1-based in text.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(parts: Vec<u32>) -> Self {
        MultiIndex(parts)
    }

    pub fn zeros(r: usize) -> Self {
        MultiIndex(vec![0; r])
    }

    pub fn r(&self) -> usize {
        self.0.len()
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, j: usize) -> u32 {
        self.0[j]
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `n + e_j`.
    pub fn plus(&self, j: usize) -> Self {
        let mut p = self.0.clone();
        p[j] += 1;
        MultiIndex(p)
    }

    /// `n - e_j`, failing when `n_j = 0`.
    pub fn minus(&self, j: usize) -> Result<Self> {
        let mut p = self.0.clone();
        if p[j] == 0 {
            return Err(Error::NegativeIndex { index: self.to_string(), direction: j + 1 });
        }
        p[j] -= 1;
        Ok(MultiIndex(p))
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Every index with `|n| <= max_total`, in lexicographic order.
    pub fn all_up_to(r: usize, max_total: u32) -> Vec<Self> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; r];
        fn rec(pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if pos == cur.len() {
                out.push(MultiIndex(cur.clone()));
                return;
            }
            for v in 0..=left {
                cur[pos] = v;
                rec(pos + 1, left - v, cur, out);
            }
            cur[pos] = 0;
        }
        rec(0, max_total, &mut cur, &mut out);
        out
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neighbors() {
        let n = MultiIndex::new(vec![2, 0]);
        assert_eq!(n.plus(1), MultiIndex::new(vec![2, 1]));
        assert_eq!(n.minus(0).unwrap(), MultiIndex::new(vec![1, 0]));
        assert!(matches!(n.minus(1), Err(Error::NegativeIndex { direction: 2, .. })));
        assert_eq!(n.to_string(), "(2,0)");
    }

    #[test]
    fn enumeration_is_sorted_and_complete() {
        let all = MultiIndex::all_up_to(2, 3);
        assert_eq!(all.len(), 10);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(MultiIndex::all_up_to(3, 2).len(), 10);
        assert!(MultiIndex::new(vec![1, 1]).le(&MultiIndex::new(vec![1, 2])));
        assert!(!MultiIndex::new(vec![2, 0]).le(&MultiIndex::new(vec![1, 2])));
    }
}
