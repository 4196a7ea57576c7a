//! Christoffel-Darboux identity along lattice paths.

use std::fmt;

use super::{MopSystem, MultiIndex};
use crate::error::{Error, Result};
use crate::kernel::{BiPoly, Scalar};
use crate::verify::{Residual, Verification};

/// Staircase from `0` to some index, one unit step per entry (0-based directions).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePath(Vec<usize>);

impl LatticePath {
    pub fn new(steps: Vec<usize>) -> Self {
        LatticePath(steps)
    }

    /// All steps in direction 1, then 2, and so on.
    pub fn first_coordinate_first(n: &MultiIndex) -> Self {
        LatticePath((0..n.r()).flat_map(|j| std::iter::repeat_n(j, n.get(j) as usize)).collect())
    }

    /// All steps in direction r, then r-1, and so on.
    pub fn last_coordinate_first(n: &MultiIndex) -> Self {
        LatticePath((0..n.r()).rev().flat_map(|j| std::iter::repeat_n(j, n.get(j) as usize)).collect())
    }

    /// Parses a string of 1-based direction digits such as `"1212"`.
    pub fn parse(text: &str, r: usize) -> Result<Self> {
        text.chars()
            .map(|c| match c.to_digit(10) {
                Some(d) if d >= 1 && (d as usize) <= r => Ok(d as usize - 1),
                _ => Err(Error::InvalidParameter(format!("`{c}` is not a direction in 1..{r}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(LatticePath)
    }

    pub fn steps(&self) -> &[usize] {
        &self.0
    }

    /// Visited indices `n_0 = 0, n_1, ..., n_|n|`.
    pub fn indices(&self, r: usize) -> Result<Vec<MultiIndex>> {
        let mut cur = MultiIndex::zeros(r);
        let mut out = vec![cur.clone()];
        for &j in &self.0 {
            if j >= r {
                return Err(Error::InvalidParameter(format!("path step {} exceeds r = {r}", j + 1)));
            }
            cur = cur.plus(j);
            out.push(cur.clone());
        }
        Ok(out)
    }
}

impl fmt::Display for LatticePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in &self.0 {
            write!(f, "{}", j + 1)?;
        }
        Ok(())
    }
}

impl<S: Scalar> MopSystem<S> {
    /// `(x - y) sum_i P_{n_i}(x) A_{n_{i+1},k}(y)` along `path`.
    fn cd_left(&self, path: &LatticePath, k: usize) -> Result<BiPoly<S>> {
        let indices = path.indices(self.r())?;
        let mut acc = BiPoly::zero(self.ctx());
        for pair in indices.windows(2) {
            acc = acc.add(&BiPoly::outer(&self.type2(&pair[0])?.p, &self.type1(&pair[1])?.a[k]));
        }
        Ok(acc.mul_x_minus_y())
    }

    /// `P_n(x) A_{n,k}(y) - sum_j a_{n,j} P_{n-e_j}(x) A_{n+e_j,k}(y)`.
    fn cd_right(&self, n: &MultiIndex, k: usize) -> Result<BiPoly<S>> {
        let coeffs = self.nn_coeffs(n)?;
        let mut acc = BiPoly::outer(&self.type2(n)?.p, &self.type1(n)?.a[k]);
        for j in 0..self.r() {
            if n.get(j) == 0 {
                continue;
            }
            let term = BiPoly::outer(&self.lower(n, j)?, &self.type1(&n.plus(j))?.a[k]);
            acc = acc.sub(&term.scale(&coeffs.a[j]));
        }
        Ok(acc)
    }

    /// Component-wise Christoffel-Darboux identity at `n` along two paths,
    /// plus agreement of the two left sides and the sum over components.
    pub fn verify_cd(&self, n: &MultiIndex, path_a: &LatticePath, path_b: &LatticePath) -> Result<Verification> {
        self.check_index(n)?;
        for path in [path_a, path_b] {
            let end = path.indices(self.r())?.pop().expect("path starts at zero");
            if &end != n {
                return Err(Error::InvalidParameter(format!("path {path} ends at {end}, not {n}")));
            }
        }
        let ctx = self.ctx();
        let mut check = Residual::new(ctx, "Christoffel-Darboux", format!("{n} paths {path_a}/{path_b}"));
        let (mut sum_left, mut sum_right) = (BiPoly::zero(ctx), BiPoly::zero(ctx));
        for k in 0..self.r() {
            let left_a = self.cd_left(path_a, k)?;
            let left_b = self.cd_left(path_b, k)?;
            let right = self.cd_right(n, k)?;
            check.bipoly(&format!("component {} path {path_a}", k + 1), &left_a, &right);
            check.bipoly(&format!("component {} path {path_b}", k + 1), &left_b, &right);
            check.bipoly(&format!("component {} path independence", k + 1), &left_a, &left_b);
            sum_left = sum_left.add(&left_a);
            sum_right = sum_right.add(&right);
        }
        check.bipoly("sum over components", &sum_left, &sum_right);
        check.finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::Rational;
    use crate::weights::WeightSystem;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn paths() {
        let n = MultiIndex::new(vec![2, 1]);
        assert_eq!(LatticePath::first_coordinate_first(&n).to_string(), "112");
        assert_eq!(LatticePath::last_coordinate_first(&n).to_string(), "211");
        assert_eq!(LatticePath::parse("121", 2).unwrap().indices(2).unwrap().last(), Some(&n));
        assert!(LatticePath::parse("13", 2).is_err());
    }

    #[test]
    fn hermite_and_laguerre_identities() {
        let h = MopSystem::new(WeightSystem::hermite(vec![q(1, 1), q(-1, 1)]).unwrap());
        let n = MultiIndex::new(vec![2, 2]);
        h.verify_cd(&n, &LatticePath::first_coordinate_first(&n), &LatticePath::last_coordinate_first(&n)).unwrap();
        h.verify_cd(&n, &LatticePath::parse("1212", 2).unwrap(), &LatticePath::parse("2121", 2).unwrap()).unwrap();
        let one = MultiIndex::new(vec![1, 0]);
        let p = LatticePath::first_coordinate_first(&one);
        h.verify_cd(&one, &p, &p).unwrap();

        let l = MopSystem::new(WeightSystem::laguerre_first(vec![q(1, 2), q(3, 4)]).unwrap());
        let n = MultiIndex::new(vec![2, 1]);
        l.verify_cd(&n, &LatticePath::first_coordinate_first(&n), &LatticePath::last_coordinate_first(&n)).unwrap();
    }

    #[test]
    fn wrong_endpoint_is_rejected() {
        let h = MopSystem::new(WeightSystem::hermite(vec![q(1, 1), q(-1, 1)]).unwrap());
        let n = MultiIndex::new(vec![1, 1]);
        let p = LatticePath::parse("11", 2).unwrap();
        assert!(h.verify_cd(&n, &p, &p).is_err());
    }
}
