//! Monomial orders: graded reverse lexicographic, lexicographic, and block
//! (elimination) orders, all over an explicit variable priority permutation.

use std::cmp::Ordering;

/// Total multiplicative order on exponent vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MonomialOrder {
    /// Graded reverse lexicographic; `perm` lists variable indices from
    /// highest to lowest priority.
    GrevLex { perm: Vec<usize> },
    /// Lexicographic along `perm`.
    Lex { perm: Vec<usize> },
    /// Compare the `elim` block first (grevlex among those variables); ties
    /// are broken by `inner` on the remaining variables. Eliminates exactly
    /// the `elim` variables.
    Block {
        elim: Vec<usize>,
        inner: Box<MonomialOrder>,
    },
}

impl MonomialOrder {
    pub fn grevlex(nvars: usize) -> MonomialOrder {
        MonomialOrder::GrevLex {
            perm: (0..nvars).collect(),
        }
    }

    pub fn lex(perm: Vec<usize>) -> MonomialOrder {
        MonomialOrder::Lex { perm }
    }

    /// Elimination order for the given variable indices over grevlex on the
    /// rest.
    pub fn elimination(nvars: usize, elim: &[usize]) -> MonomialOrder {
        let rest: Vec<usize> = (0..nvars).filter(|i| !elim.contains(i)).collect();
        MonomialOrder::Block {
            elim: elim.to_vec(),
            inner: Box::new(MonomialOrder::GrevLex { perm: rest }),
        }
    }

    fn grevlex_cmp(perm: &[usize], a: &[u32], b: &[u32]) -> Ordering {
        let da: u64 = perm.iter().map(|&i| a[i] as u64).sum();
        let db: u64 = perm.iter().map(|&i| b[i] as u64).sum();
        match da.cmp(&db) {
            Ordering::Equal => {}
            o => return o,
        }
        // last (lowest-priority) variable with differing exponent; the
        // smaller exponent there wins
        for &i in perm.iter().rev() {
            match a[i].cmp(&b[i]) {
                Ordering::Equal => {}
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
            }
        }
        Ordering::Equal
    }

    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        match self {
            MonomialOrder::GrevLex { perm } => Self::grevlex_cmp(perm, a, b),
            MonomialOrder::Lex { perm } => {
                for &i in perm {
                    match a[i].cmp(&b[i]) {
                        Ordering::Equal => {}
                        o => return o,
                    }
                }
                Ordering::Equal
            }
            MonomialOrder::Block { elim, inner } => {
                match Self::grevlex_cmp(elim, a, b) {
                    Ordering::Equal => inner.cmp(a, b),
                    o => o,
                }
            }
        }
    }

    /// Variable indices eliminated by this order (empty unless block).
    pub fn eliminated(&self) -> &[usize] {
        match self {
            MonomialOrder::Block { elim, .. } => elim,
            _ => &[],
        }
    }

    /// Stable cache key.
    pub fn key(&self) -> String {
        match self {
            MonomialOrder::GrevLex { perm } => format!("g{perm:?}"),
            MonomialOrder::Lex { perm } => format!("l{perm:?}"),
            MonomialOrder::Block { elim, inner } => format!("b{elim:?}|{}", inner.key()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::cmp::Ordering::*;

    #[test]
    fn grevlex_degree_first() {
        let o = MonomialOrder::grevlex(3);
        assert_eq!(o.cmp(&[2, 0, 1], &[1, 1, 0]), Greater);
    }

    #[test]
    fn grevlex_tiebreak() {
        // with x > y > z: x^2 > xy > y^2 > xz > yz > z^2
        let o = MonomialOrder::grevlex(3);
        let seq = [
            [2, 0, 0],
            [1, 1, 0],
            [0, 2, 0],
            [1, 0, 1],
            [0, 1, 1],
            [0, 0, 2],
        ];
        for w in seq.windows(2) {
            assert_eq!(o.cmp(&w[0], &w[1]), Greater, "{:?} vs {:?}", w[0], w[1]);
        }
    }

    #[test]
    fn lex_ignores_degree() {
        let o = MonomialOrder::lex(vec![0, 1]);
        assert_eq!(o.cmp(&[1, 0], &[0, 5]), Greater);
    }

    #[test]
    fn block_order_elimination_property() {
        // any monomial containing an eliminated variable beats any that
        // does not
        let o = MonomialOrder::elimination(3, &[2]);
        assert_eq!(o.cmp(&[0, 0, 1], &[4, 4, 0]), Greater);
        assert_eq!(o.cmp(&[5, 0, 0], &[0, 1, 0]), Greater);
    }
}
