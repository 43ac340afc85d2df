//! Reference computations written independently of the library, used as
//! oracles by the integration tests.
#![allow(dead_code)]

use std::collections::HashSet;

use default_bilattices::algebra::{BinOp, FiniteAlgebra, BIN_OPS};

/// Elements of K_n by position: f_i = i, t_i = n+1+i, ⊤_i = 2(n+1)+i.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Val {
    F(usize),
    T(usize),
    Top(usize),
}

pub fn size(n: usize) -> usize {
    3 * n + 4
}

pub fn val(n: usize, a: usize) -> Val {
    if a <= n {
        Val::F(a)
    } else if a <= 2 * n + 1 {
        Val::T(a - n - 1)
    } else {
        Val::Top(a - 2 * (n + 1))
    }
}

pub fn pos(n: usize, v: Val) -> usize {
    match v {
        Val::F(i) => i,
        Val::T(i) => n + 1 + i,
        Val::Top(i) => 2 * (n + 1) + i,
    }
}

/// Distance from the knowledge top: ⊤_i sits at 2i, f_i and t_i at 2i+1.
fn depth(n: usize, a: usize) -> usize {
    match val(n, a) {
        Val::Top(i) => 2 * i,
        Val::F(i) | Val::T(i) => 2 * i + 1,
    }
}

pub fn k_leq(n: usize, a: usize, b: usize) -> bool {
    a == b || depth(n, a) > depth(n, b)
}

/// The truth order, as the transitive closure of its covers.
pub fn t_order(n: usize) -> Vec<Vec<bool>> {
    let s = size(n);
    let mut r = vec![vec![false; s]; s];
    for (a, row) in r.iter_mut().enumerate() {
        row[a] = true;
    }
    let mut cover = |a: Val, b: Val| r[pos(n, a)][pos(n, b)] = true;
    for i in 0..n {
        cover(Val::F(i), Val::F(i + 1));
        cover(Val::T(i + 1), Val::T(i));
    }
    for i in 0..=n {
        cover(Val::F(i), Val::Top(i));
        cover(Val::Top(i), Val::T(i));
    }
    cover(Val::F(n), Val::Top(n + 1));
    cover(Val::Top(n + 1), Val::T(n));
    for k in 0..s {
        for i in 0..s {
            for j in 0..s {
                if r[i][k] && r[k][j] {
                    r[i][j] = true;
                }
            }
        }
    }
    r
}

pub fn neg(n: usize, a: usize) -> usize {
    match val(n, a) {
        Val::F(i) => pos(n, Val::T(i)),
        Val::T(i) => pos(n, Val::F(i)),
        top => pos(n, top),
    }
}

fn bound(s: usize, leq: &dyn Fn(usize, usize) -> bool, a: usize, b: usize, lower: bool) -> usize {
    let cands: Vec<usize> = (0..s)
        .filter(|&c| if lower { leq(c, a) && leq(c, b) } else { leq(a, c) && leq(b, c) })
        .collect();
    let best: Vec<usize> = cands
        .iter()
        .copied()
        .filter(|&c| cands.iter().all(|&d| if lower { leq(d, c) } else { leq(c, d) }))
        .collect();
    assert_eq!(best.len(), 1, "bound must exist and be unique");
    best[0]
}

/// K_n's four binary operations from the two orders.
pub fn op(n: usize, t: &[Vec<bool>], which: BinOp, a: usize, b: usize) -> usize {
    let s = size(n);
    match which {
        BinOp::KMeet => bound(s, &|x, y| k_leq(n, x, y), a, b, true),
        BinOp::KJoin => bound(s, &|x, y| k_leq(n, x, y), a, b, false),
        BinOp::TMeet => bound(s, &|x, y| t[x][y], a, b, true),
        BinOp::TJoin => bound(s, &|x, y| t[x][y], a, b, false),
    }
}

/// S_{n,m} = Δ ∪ {both ≤k ⊤_{m+1}} ∪ {a ≤k b ≤k ⊤_m}.
pub fn s_rel(n: usize, m: usize, a: usize, b: usize) -> bool {
    let low = pos(n, Val::Top(m + 1));
    let high = pos(n, Val::Top(m));
    a == b || (k_leq(n, a, low) && k_leq(n, b, low)) || (k_leq(n, a, b) && k_leq(n, b, high))
}

/// h_{n,m} by names.
pub fn h(n: usize, m: usize, a: usize) -> usize {
    let low = pos(n, Val::Top(m + 1));
    if k_leq(n, a, low) {
        pos(m, Val::Top(m + 1))
    } else {
        pos(m, val(n, a))
    }
}

pub fn is_hom(a: &FiniteAlgebra, b: &FiniteAlgebra, map: &[usize]) -> bool {
    if map.len() != a.size() || map.iter().any(|&v| v >= b.size()) {
        return false;
    }
    if map[a.bot()] != b.bot() || map[a.top()] != b.top() {
        return false;
    }
    for x in 0..a.size() {
        if map[a.neg(x)] != b.neg(map[x]) {
            return false;
        }
        for y in 0..a.size() {
            for o in BIN_OPS {
                if map[a.op(o, x, y)] != b.op(o, map[x], map[y]) {
                    return false;
                }
            }
        }
    }
    true
}

pub fn is_iso(a: &FiniteAlgebra, b: &FiniteAlgebra, map: &[usize]) -> bool {
    let distinct: HashSet<usize> = map.iter().copied().collect();
    a.size() == b.size() && distinct.len() == a.size() && is_hom(a, b, map)
}

/// The order of a bilattice from its knowledge meet.
pub fn k_leq_alg(a: &FiniteAlgebra, x: usize, y: usize) -> bool {
    a.op(BinOp::KMeet, x, y) == x
}

pub fn t_leq_alg(a: &FiniteAlgebra, x: usize, y: usize) -> bool {
    a.op(BinOp::TMeet, x, y) == x
}

/// Negation is an involution, preserves the knowledge order and reverses
/// the truth order.
pub fn negation_laws(a: &FiniteAlgebra) -> bool {
    (0..a.size()).all(|x| {
        a.neg(a.neg(x)) == x
            && (0..a.size()).all(|y| {
                (!k_leq_alg(a, x, y) || k_leq_alg(a, a.neg(x), a.neg(y)))
                    && (!t_leq_alg(a, x, y) || t_leq_alg(a, a.neg(y), a.neg(x)))
            })
    })
}

/// Every sort-respecting map from the dual with hom tables `homs` into the
/// alter ego at level n that preserves each pointwise S_{m,m} and commutes
/// with the links, found by filtering each sort separately and then
/// combining sorts one at a time.
pub fn naive_maps(homs: &[Vec<Vec<usize>>]) -> Vec<Vec<Vec<usize>>> {
    let levels = homs.len();
    let per_sort: Vec<Vec<Vec<usize>>> = (0..levels)
        .map(|m| {
            let pts = &homs[m];
            let le = |x: usize, y: usize| pts[x].iter().zip(&pts[y]).all(|(&u, &v)| s_rel(m, m, u, v));
            let mut out = Vec::new();
            let total = size(m).pow(pts.len() as u32);
            for code in 0..total {
                let mut c = code;
                let map: Vec<usize> = (0..pts.len())
                    .map(|_| {
                        let d = c % size(m);
                        c /= size(m);
                        d
                    })
                    .collect();
                let ok = (0..pts.len())
                    .all(|x| (0..pts.len()).all(|y| !le(x, y) || s_rel(m, m, map[x], map[y])));
                if ok {
                    out.push(map);
                }
            }
            out
        })
        .collect();
    let link = |i: usize, x: usize| -> usize {
        let composed: Vec<usize> = homs[i][x].iter().map(|&v| h(i, i - 1, v)).collect();
        homs[i - 1].iter().position(|p| *p == composed).expect("link lands in the dual")
    };
    let mut partial: Vec<Vec<Vec<usize>>> = per_sort[0].iter().map(|m| vec![m.clone()]).collect();
    for i in 1..levels {
        let mut next = Vec::new();
        for p in &partial {
            for cand in &per_sort[i] {
                if (0..homs[i].len()).all(|x| h(i, i - 1, cand[x]) == p[i - 1][link(i, x)]) {
                    let mut q = p.clone();
                    q.push(cand.clone());
                    next.push(q);
                }
            }
        }
        partial = next;
    }
    partial
}

/// Up-sets of a relation given as a list of (a, b) with a ≤ b, counted by
/// trying every subset.
pub fn brute_up_set_count(size: usize, leq: &dyn Fn(usize, usize) -> bool) -> u64 {
    assert!(size <= 24);
    let mut count = 0;
    for mask in 0u32..(1u32 << size) {
        let ok = (0..size).all(|x| mask & (1 << x) == 0 || (0..size).all(|y| !leq(x, y) || mask & (1 << y) != 0));
        if ok {
            count += 1;
        }
    }
    count
}

/// A finite poset as a strict-order bitmask per element: `above[x]` holds
/// the y with x < y. Labelled so that x < y implies x < y as integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SmallPoset {
    pub size: usize,
    pub above: Vec<u32>,
}

impl SmallPoset {
    pub fn leq(&self, x: usize, y: usize) -> bool {
        x == y || self.above[x] & (1 << y) != 0
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.size)
            .flat_map(|x| (0..self.size).filter(move |&y| self.leq(x, y)).map(move |y| (x, y)))
            .collect()
    }

    pub fn up_sets(&self) -> Vec<u32> {
        (0u32..(1u32 << self.size))
            .filter(|&m| (0..self.size).all(|x| m & (1 << x) == 0 || self.above[x] & !m == 0))
            .collect()
    }

    fn canonical(&self) -> Vec<u32> {
        let mut best: Option<Vec<u32>> = None;
        let mut perm: Vec<usize> = (0..self.size).collect();
        permute(&mut perm, 0, &mut |p| {
            let mut rel = vec![0u32; self.size];
            for x in 0..self.size {
                for y in 0..self.size {
                    if self.above[x] & (1 << y) != 0 {
                        rel[p[x]] |= 1 << p[y];
                    }
                }
            }
            if best.as_ref().map_or(true, |b| rel < *b) {
                best = Some(rel);
            }
        });
        best.unwrap_or_default()
    }
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

/// Every poset on `size` points labelled compatibly with 0 < 1 < … .
pub fn natural_posets(size: usize) -> Vec<SmallPoset> {
    let slots: Vec<(usize, usize)> = (0..size).flat_map(|x| (x + 1..size).map(move |y| (x, y))).collect();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << slots.len()) {
        let mut above = vec![0u32; size];
        for (k, &(x, y)) in slots.iter().enumerate() {
            if mask & (1 << k) != 0 {
                above[x] |= 1 << y;
            }
        }
        let transitive = (0..size).all(|x| (0..size).all(|y| above[x] & (1 << y) == 0 || above[y] & !above[x] == 0));
        if transitive {
            out.push(SmallPoset { size, above });
        }
    }
    out
}

/// One representative per isomorphism class.
pub fn unlabelled_posets(size: usize) -> Vec<SmallPoset> {
    let mut seen = HashSet::new();
    natural_posets(size).into_iter().filter(|p| seen.insert(p.canonical())).collect()
}

/// Monotone maps q → p as tables.
pub fn monotone_maps(q: &SmallPoset, p: &SmallPoset) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; q.size];
    fn rec(q: &SmallPoset, p: &SmallPoset, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == q.size {
            out.push(cur.clone());
            return;
        }
        for v in 0..p.size {
            if (0..k).all(|x| (!q.leq(x, k) || p.leq(cur[x], v)) && (!q.leq(k, x) || p.leq(v, cur[x]))) {
                cur[k] = v;
                rec(q, p, k + 1, cur, out);
            }
        }
    }
    rec(q, p, 0, &mut cur, &mut out);
    out
}
