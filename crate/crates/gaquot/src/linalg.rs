//! Incremental exact linear algebra over `Q`.
//!
//! Vectors are sparse maps from monomial exponent vectors to rationals.
//! The solver keeps an echelon set of inserted vectors together with the
//! combination of inputs that produced each row, which yields kernel
//! vectors and inhomogeneous solutions without a dense matrix.

use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

use crate::poly::Exponents;

pub type SparseVec = BTreeMap<Exponents, BigRational>;
/// Combination over input ids.
pub type Combo = BTreeMap<usize, BigRational>;

#[derive(Debug, Default)]
pub struct LinSolver {
    /// pivot coordinate -> (row normalized to pivot 1, combination over inputs)
    rows: BTreeMap<Exponents, (SparseVec, Combo)>,
}

fn axpy(dst: &mut SparseVec, c: &BigRational, src: &SparseVec) {
    for (k, v) in src {
        let e = dst.entry(k.clone()).or_insert_with(BigRational::zero);
        *e += c * v;
        if e.is_zero() {
            dst.remove(k);
        }
    }
}

fn axpy_combo(dst: &mut Combo, c: &BigRational, src: &Combo) {
    for (k, v) in src {
        let e = dst.entry(*k).or_insert_with(BigRational::zero);
        *e += c * v;
        if e.is_zero() {
            dst.remove(k);
        }
    }
}

impl LinSolver {
    pub fn new() -> LinSolver {
        LinSolver::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn eliminate(&self, mut v: SparseVec, mut combo: Combo) -> (SparseVec, Combo) {
        while let Some(pivot) = v.keys().next_back().cloned() {
            match self.rows.get(&pivot) {
                Some((row, rc)) => {
                    let c = -v[&pivot].clone();
                    axpy(&mut v, &c, row);
                    axpy_combo(&mut combo, &c, rc);
                    debug_assert!(!v.contains_key(&pivot));
                }
                None => break,
            }
        }
        (v, combo)
    }

    /// Insert input vector `id`. Returns `Some(combo)` when the vector is a
    /// linear combination of earlier inputs: the combo satisfies
    /// `sum combo[k] * input_k = 0` and includes `id` with coefficient 1.
    pub fn insert(&mut self, id: usize, v: SparseVec) -> Option<Combo> {
        let mut combo = Combo::new();
        combo.insert(id, BigRational::one());
        let (v, combo) = self.eliminate(v, combo);
        match v.keys().next_back() {
            None => Some(combo),
            Some(p) => {
                let pivot = p.clone();
                let inv = BigRational::one() / &v[&pivot];
                let mut row = SparseVec::new();
                axpy(&mut row, &inv, &v);
                let mut rc = Combo::new();
                axpy_combo(&mut rc, &inv, &combo);
                self.rows.insert(pivot, (row, rc));
                None
            }
        }
    }

    /// Express `b` as a combination of the inserted inputs, if possible:
    /// returns `combo` with `sum combo[k] * input_k = b`.
    pub fn solve(&self, b: SparseVec) -> Option<Combo> {
        let (v, combo) = self.eliminate(b, Combo::new());
        if v.is_empty() {
            // b - sum c_k row_k = 0, rows are combos of inputs
            let mut out = Combo::new();
            axpy_combo(&mut out, &-BigRational::one(), &combo);
            Some(out)
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vec_of(entries: &[(&[u32], i64)]) -> SparseVec {
        entries
            .iter()
            .map(|(e, c)| (e.to_vec(), BigRational::from_integer((*c).into())))
            .collect()
    }

    #[test]
    fn kernel_detection() {
        let mut s = LinSolver::new();
        let a = vec_of(&[(&[1, 0], 1)]);
        let b = vec_of(&[(&[0, 1], 1)]);
        let c = vec_of(&[(&[1, 0], 2), (&[0, 1], 3)]);
        assert!(s.insert(0, a).is_none());
        assert!(s.insert(1, b).is_none());
        let combo = s.insert(2, c).expect("dependent");
        // input_2 - 2 input_0 - 3 input_1 = 0  => combo has id 2 coeff 1
        assert_eq!(combo[&2], BigRational::one());
        assert_eq!(combo[&0], BigRational::from_integer((-2).into()));
        assert_eq!(combo[&1], BigRational::from_integer((-3).into()));
    }

    #[test]
    fn inhomogeneous_solve() {
        let mut s = LinSolver::new();
        s.insert(0, vec_of(&[(&[1], 2)]));
        s.insert(1, vec_of(&[(&[0], 1), (&[1], 1)]));
        let b = vec_of(&[(&[0], 3), (&[1], 5)]);
        let combo = s.solve(b).expect("solvable");
        // 1*input_0 + 3*input_1 = (3, 5)
        assert_eq!(combo[&0], BigRational::one());
        assert_eq!(combo[&1], BigRational::from_integer(3.into()));
        assert!(s.solve(vec_of(&[(&[2], 1)])).is_none());
    }
}
