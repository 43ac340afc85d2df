//! The default bilattices K_n, the homomorphisms between them and the
//! relations S_{n,m}.
//!
//! K_n has the 3n+4 elements f_0..f_n, t_0..t_n, ⊤_0..⊤_{n+1}, indexed in
//! that order. ⊤_0 is the knowledge top and ⊤_{n+1} the knowledge bottom.

use std::fmt;

use crate::algebra::{BinOp, Congruence, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::poset::{ElemSet, Poset, QuasiOrder};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KnElem {
    F(usize),
    T(usize),
    Top(usize),
}

impl KnElem {
    pub fn index_in(self, n: usize) -> Option<usize> {
        match self {
            KnElem::F(i) if i <= n => Some(i),
            KnElem::T(i) if i <= n => Some(n + 1 + i),
            KnElem::Top(i) if i <= n + 1 => Some(2 * (n + 1) + i),
            _ => None,
        }
    }

    pub fn from_index(n: usize, idx: usize) -> Option<KnElem> {
        match idx {
            i if i <= n => Some(KnElem::F(i)),
            i if i <= 2 * n + 1 => Some(KnElem::T(i - n - 1)),
            i if i <= 3 * n + 3 => Some(KnElem::Top(i - 2 * (n + 1))),
            _ => None,
        }
    }

    /// The level subscript.
    pub fn level(self) -> usize {
        match self {
            KnElem::F(i) | KnElem::T(i) | KnElem::Top(i) => i,
        }
    }

    pub fn parse(s: &str) -> Option<KnElem> {
        let (ctor, rest): (fn(usize) -> KnElem, &str) = if let Some(r) = s.strip_prefix("top") {
            (KnElem::Top, r)
        } else if let Some(r) = s.strip_prefix('f') {
            (KnElem::F, r)
        } else if let Some(r) = s.strip_prefix('t') {
            (KnElem::T, r)
        } else {
            return None;
        };
        rest.parse().ok().map(ctor)
    }
}

impl fmt::Display for KnElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KnElem::F(i) => write!(f, "f{i}"),
            KnElem::T(i) => write!(f, "t{i}"),
            KnElem::Top(i) => write!(f, "top{i}"),
        }
    }
}

/// Cover pairs (lower, upper) of the knowledge order: a stack of diamonds
/// ⊤_{i+1} < f_i, t_i < ⊤_i.
pub fn knowledge_covers(n: usize) -> Vec<(KnElem, KnElem)> {
    use KnElem::*;
    let mut out = Vec::new();
    for i in 0..=n {
        out.push((Top(i + 1), F(i)));
        out.push((Top(i + 1), T(i)));
        out.push((F(i), Top(i)));
        out.push((T(i), Top(i)));
    }
    out
}

/// Cover pairs of the truth order: f_0 < f_1 < … < f_n < ⊤_{n+1} < t_n <
/// … < t_0, with ⊤_i squeezed between f_i and t_i.
pub fn truth_covers(n: usize) -> Vec<(KnElem, KnElem)> {
    use KnElem::*;
    let mut out = Vec::new();
    for i in 0..n {
        out.push((F(i), F(i + 1)));
        out.push((T(i + 1), T(i)));
    }
    for i in 0..=n {
        out.push((F(i), Top(i)));
        out.push((Top(i), T(i)));
    }
    out.push((F(n), Top(n + 1)));
    out.push((Top(n + 1), T(n)));
    out
}

/// K_n together with its element registry.
#[derive(Clone, Debug)]
pub struct Kn {
    n: usize,
    algebra: FiniteAlgebra,
    k_order: Poset,
}

impl Kn {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.algebra
    }

    pub fn into_algebra(self) -> FiniteAlgebra {
        self.algebra
    }

    pub fn size(&self) -> usize {
        3 * self.n + 4
    }

    pub fn idx(&self, e: KnElem) -> usize {
        e.index_in(self.n).unwrap_or_else(|| panic!("{e} is not an element of K_{}", self.n))
    }

    pub fn elem(&self, idx: usize) -> KnElem {
        KnElem::from_index(self.n, idx).expect("index within K_n")
    }

    pub fn k_leq(&self, a: usize, b: usize) -> bool {
        self.k_order.leq(a, b)
    }

    pub fn knowledge_order(&self) -> &Poset {
        &self.k_order
    }

    /// ⊤_{n+1}, the knowledge bottom.
    pub fn bottom(&self) -> usize {
        self.idx(KnElem::Top(self.n + 1))
    }
}

/// Build K_n from its two orders and negation; operation tables are the
/// meets and joins of the orders.
pub fn build_kn(n: usize) -> Kn {
    let size = 3 * n + 4;
    let idx = |e: KnElem| e.index_in(n).unwrap();
    let k = Poset::from_pairs(size, knowledge_covers(n).into_iter().map(|(a, b)| (idx(a), idx(b)))).unwrap();
    let t = Poset::from_pairs(size, truth_covers(n).into_iter().map(|(a, b)| (idx(a), idx(b)))).unwrap();
    let neg = (0..size)
        .map(|i| match KnElem::from_index(n, i).unwrap() {
            KnElem::F(j) => idx(KnElem::T(j)),
            KnElem::T(j) => idx(KnElem::F(j)),
            top => idx(top),
        })
        .collect();
    let names = (0..size).map(|i| KnElem::from_index(n, i).unwrap().to_string()).collect();
    let algebra = FiniteAlgebra::from_orders(&k, &t, neg, Some(names)).expect("K_n is a bilattice");
    Kn { n, algebra, k_order: k }
}

fn check_indices(n: usize, m: usize) -> Result<()> {
    if m > n {
        Err(Error::BadIndices { n, m })
    } else {
        Ok(())
    }
}

/// h_{n,m}: collapse everything knowledge-below ⊤_{m+1} to ⊤_{m+1}; every
/// other element keeps its name.
pub fn h_nm(n: usize, m: usize) -> Result<Vec<usize>> {
    check_indices(n, m)?;
    let kn = build_kn(n);
    let floor = kn.idx(KnElem::Top(m + 1));
    Ok((0..kn.size())
        .map(|a| {
            let e = if kn.k_leq(a, floor) { KnElem::Top(m + 1) } else { kn.elem(a) };
            e.index_in(m).expect("surviving element lives in K_m")
        })
        .collect())
}

/// The kernel of h_{n,m}, written down directly: the identity plus
/// everything knowledge-below ⊤_{m+1} collapsed into one block.
pub fn kernel_h(n: usize, m: usize) -> Result<Congruence> {
    check_indices(n, m)?;
    let kn = build_kn(n);
    let floor = kn.idx(KnElem::Top(m + 1));
    let labels: Vec<usize> = (0..kn.size()).map(|a| if kn.k_leq(a, floor) { floor } else { a }).collect();
    Ok(Congruence::from_labels(&labels))
}

/// S_{n,m} = Δ ∪ {(a,b) : a,b ≤k ⊤_{m+1}, or a ≤k b ≤k ⊤_m}.
pub fn s_nm(n: usize, m: usize) -> Result<QuasiOrder> {
    check_indices(n, m)?;
    let kn = build_kn(n);
    let lower = kn.idx(KnElem::Top(m + 1));
    let upper = kn.idx(KnElem::Top(m));
    QuasiOrder::from_fn(kn.size(), |a, b| {
        a == b
            || (kn.k_leq(a, lower) && kn.k_leq(b, lower))
            || (kn.k_leq(a, b) && kn.k_leq(b, upper))
    })
}

/// A binary relation on K_n as a subset of K_n² (pair (a,b) at a·|K_n|+b).
pub fn relation_subset(size: usize, rel: &QuasiOrder) -> ElemSet {
    crate::algebra::relation_as_set(size, size, |a, b| rel.leq(a, b))
}

/// A failure of interlacing: `lo ≤ hi` in one order, but `lo op other` and
/// `hi op other` are not related in that same order, where `op` belongs to
/// the other lattice structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InterlaceViolation {
    pub op: BinOp,
    pub lo: usize,
    pub hi: usize,
    pub other: usize,
}

/// Every interlacing failure: ⊗ and ⊕ must be monotone for ≤t, ∧ and ∨ for
/// ≤k, in each argument.
pub fn interlacing_violations(a: &FiniteAlgebra) -> Vec<InterlaceViolation> {
    let mut out = Vec::new();
    let n = a.size();
    for op in crate::algebra::BIN_OPS {
        let leq = |x: usize, y: usize| match op {
            BinOp::KMeet | BinOp::KJoin => a.t_leq(x, y),
            BinOp::TMeet | BinOp::TJoin => a.k_leq(x, y),
        };
        for lo in 0..n {
            for hi in 0..n {
                if lo == hi || !leq(lo, hi) {
                    continue;
                }
                for other in 0..n {
                    if !leq(a.op(op, lo, other), a.op(op, hi, other)) {
                        out.push(InterlaceViolation { op, lo, hi, other });
                    }
                }
            }
        }
    }
    out
}

/// `None` if interlaced, otherwise the first violation found.
pub fn check_interlaced(a: &FiniteAlgebra) -> Option<InterlaceViolation> {
    interlacing_violations(a).into_iter().next()
}
