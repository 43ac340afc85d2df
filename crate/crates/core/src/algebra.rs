//! Finite algebras in the bilattice signature (⊗, ⊕, ∧, ∨, ¬, ⊥, ⊤) and the
//! brute-force machinery over them: subuniverses, homomorphisms,
//! congruences, quotients, products and isomorphism search.

use std::collections::{BTreeSet, HashSet};

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::lattice::{bound_tables, DistLattice};
use crate::poset::{set_from, ElemSet, Poset};

/// The four binary operations. `KMeet`/`KJoin` are ⊗/⊕ (knowledge order),
/// `TMeet`/`TJoin` are ∧/∨ (truth order).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BinOp {
    KMeet,
    KJoin,
    TMeet,
    TJoin,
}

pub const BIN_OPS: [BinOp; 4] = [BinOp::KMeet, BinOp::KJoin, BinOp::TMeet, BinOp::TJoin];

impl BinOp {
    pub fn key(self) -> &'static str {
        match self {
            BinOp::KMeet => "kmeet",
            BinOp::KJoin => "kjoin",
            BinOp::TMeet => "tmeet",
            BinOp::TJoin => "tjoin",
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::KMeet => "⊗",
            BinOp::KJoin => "⊕",
            BinOp::TMeet => "∧",
            BinOp::TJoin => "∨",
        }
    }

    fn slot(self) -> usize {
        self as usize
    }
}

/// Operation tables over `0..size`. Binary tables are row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAlgebra {
    size: usize,
    tables: [Vec<usize>; 4],
    neg: Vec<usize>,
    bot: usize,
    top: usize,
    names: Option<Vec<String>>,
}

impl FiniteAlgebra {
    /// `tables` are indexed in [`BIN_OPS`] order. `bot`/`top` are the
    /// knowledge bounds.
    pub fn new(
        size: usize,
        tables: [Vec<usize>; 4],
        neg: Vec<usize>,
        bot: usize,
        top: usize,
        names: Option<Vec<String>>,
    ) -> Result<Self> {
        let a = FiniteAlgebra::new_unchecked(size, tables, neg, bot, top, names);
        a.validate()?;
        Ok(a)
    }

    pub fn new_unchecked(
        size: usize,
        tables: [Vec<usize>; 4],
        neg: Vec<usize>,
        bot: usize,
        top: usize,
        names: Option<Vec<String>>,
    ) -> Self {
        FiniteAlgebra { size, tables, neg, bot, top, names }
    }

    /// Tables derived from a knowledge order and a truth order by bound search.
    pub fn from_orders(k: &Poset, t: &Poset, neg: Vec<usize>, names: Option<Vec<String>>) -> Result<Self> {
        if k.size() != t.size() {
            return Err(Error::LengthMismatch { expected: k.size(), found: t.size() });
        }
        let n = k.size();
        let (kmeet, kjoin) = bound_tables(k)?;
        let (tmeet, tjoin) = bound_tables(t)?;
        let bot = (0..n)
            .find(|&x| (0..n).all(|y| k.leq(x, y)))
            .ok_or_else(|| Error::NotALattice("knowledge order has no least element".into()))?;
        let top = (0..n)
            .find(|&x| (0..n).all(|y| k.leq(y, x)))
            .ok_or_else(|| Error::NotALattice("knowledge order has no greatest element".into()))?;
        FiniteAlgebra::new(n, [kmeet, kjoin, tmeet, tjoin], neg, bot, top, names)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.size;
        if n == 0 {
            return Err(Error::InvalidAlgebra("empty universe".into()));
        }
        for t in &self.tables {
            if t.len() != n * n {
                return Err(Error::LengthMismatch { expected: n * n, found: t.len() });
            }
            if let Some(&v) = t.iter().find(|&&v| v >= n) {
                return Err(Error::IndexOutOfRange { index: v, size: n });
            }
        }
        if self.neg.len() != n {
            return Err(Error::LengthMismatch { expected: n, found: self.neg.len() });
        }
        for &v in self.neg.iter().chain([&self.bot, &self.top]) {
            if v >= n {
                return Err(Error::IndexOutOfRange { index: v, size: n });
            }
        }
        if let Some(names) = &self.names {
            if names.len() != n {
                return Err(Error::LengthMismatch { expected: n, found: names.len() });
            }
        }
        check_lattice(n, &self.tables[0], &self.tables[1], "knowledge")?;
        check_lattice(n, &self.tables[2], &self.tables[3], "truth")?;
        for x in 0..n {
            if self.op(BinOp::KMeet, self.bot, x) != self.bot || self.op(BinOp::KJoin, self.top, x) != self.top {
                return Err(Error::InvalidAlgebra(format!("⊥/⊤ do not bound the knowledge order at {x}")));
            }
        }
        let tbot = self.op(BinOp::TMeet, self.top, self.bot);
        let ttop = self.op(BinOp::TJoin, self.top, self.bot);
        for x in 0..n {
            if self.op(BinOp::TMeet, tbot, x) != tbot || self.op(BinOp::TJoin, ttop, x) != ttop {
                return Err(Error::InvalidAlgebra(format!("⊤∧⊥ and ⊤∨⊥ do not bound the truth order at {x}")));
            }
        }
        for x in 0..n {
            if self.neg(self.neg(x)) != x {
                return Err(Error::InvalidAlgebra(format!("¬ is not involutive at {x}")));
            }
            for y in 0..n {
                if self.k_leq(x, y) && !self.k_leq(self.neg(x), self.neg(y)) {
                    return Err(Error::InvalidAlgebra(format!("¬ does not preserve ≤k at ({x},{y})")));
                }
                if self.t_leq(x, y) && !self.t_leq(self.neg(y), self.neg(x)) {
                    return Err(Error::InvalidAlgebra(format!("¬ does not reverse ≤t at ({x},{y})")));
                }
            }
        }
        Ok(())
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn op(&self, op: BinOp, a: usize, b: usize) -> usize {
        self.tables[op.slot()][a * self.size + b]
    }

    pub fn table(&self, op: BinOp) -> &[usize] {
        &self.tables[op.slot()]
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        self.neg[a]
    }

    pub fn neg_table(&self) -> &[usize] {
        &self.neg
    }

    pub fn bot(&self) -> usize {
        self.bot
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    pub fn name(&self, a: usize) -> String {
        match &self.names {
            Some(n) => n[a].clone(),
            None => a.to_string(),
        }
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.size {
            return Err(Error::LengthMismatch { expected: self.size, found: names.len() });
        }
        self.names = Some(names);
        Ok(self)
    }

    pub fn index_of_name(&self, name: &str) -> Option<usize> {
        self.names.as_ref()?.iter().position(|n| n == name)
    }

    #[inline]
    pub fn k_leq(&self, a: usize, b: usize) -> bool {
        self.op(BinOp::KMeet, a, b) == a
    }

    #[inline]
    pub fn t_leq(&self, a: usize, b: usize) -> bool {
        self.op(BinOp::TMeet, a, b) == a
    }

    pub fn knowledge_order(&self) -> Poset {
        Poset::from_fn(self.size, |a, b| self.k_leq(a, b)).expect("knowledge order")
    }

    pub fn truth_order(&self) -> Poset {
        Poset::from_fn(self.size, |a, b| self.t_leq(a, b)).expect("truth order")
    }

    /// The (⊗, ⊕) reduct as a distributive lattice.
    pub fn knowledge_lattice(&self) -> Result<DistLattice> {
        DistLattice::new(
            self.size,
            self.tables[0].clone(),
            self.tables[1].clone(),
            self.bot,
            self.top,
        )
    }

    /// The (∧, ∨) reduct as a distributive lattice, if it is one.
    pub fn truth_lattice(&self) -> Result<DistLattice> {
        DistLattice::new(
            self.size,
            self.tables[2].clone(),
            self.tables[3].clone(),
            self.op(BinOp::TMeet, self.top, self.bot),
            self.op(BinOp::TJoin, self.top, self.bot),
        )
    }

    /// Least subuniverse containing `seed`. Constants are always included.
    pub fn generate(&self, seed: &[usize]) -> ElemSet {
        let mut inside = FixedBitSet::with_capacity(self.size);
        let mut elems = Vec::new();
        self.close_into(seed, &mut inside, &mut elems);
        inside
    }

    /// Closure of `base ∪ extra`.
    pub fn generate_over(&self, base: &ElemSet, extra: &[usize]) -> ElemSet {
        let seed: Vec<usize> = base.ones().chain(extra.iter().copied()).collect();
        self.generate(&seed)
    }

    fn close_into(&self, seed: &[usize], inside: &mut ElemSet, elems: &mut Vec<usize>) {
        let push = |x: usize, inside: &mut ElemSet, elems: &mut Vec<usize>| {
            if !inside.put(x) {
                elems.push(x);
            }
        };
        push(self.bot, inside, elems);
        push(self.top, inside, elems);
        for &s in seed {
            push(s, inside, elems);
        }
        let mut i = 0;
        while i < elems.len() {
            let x = elems[i];
            push(self.neg(x), inside, elems);
            for j in 0..=i {
                let y = elems[j];
                for op in BIN_OPS {
                    push(self.op(op, x, y), inside, elems);
                    push(self.op(op, y, x), inside, elems);
                }
            }
            i += 1;
        }
    }

    pub fn is_subuniverse(&self, set: &ElemSet) -> bool {
        if !set.contains(self.bot) || !set.contains(self.top) {
            return false;
        }
        set.ones().all(|x| {
            set.contains(self.neg(x))
                && set
                    .ones()
                    .all(|y| BIN_OPS.iter().all(|&op| set.contains(self.op(op, x, y))))
        })
    }

    /// The subalgebra on `set`, elements in increasing index order, with the
    /// inclusion map.
    pub fn subalgebra(&self, set: &ElemSet) -> Result<(FiniteAlgebra, Vec<usize>)> {
        if !self.is_subuniverse(set) {
            return Err(Error::ClosureFailure("set is not a subuniverse".into()));
        }
        let elems: Vec<usize> = set.ones().collect();
        let mut pos = vec![usize::MAX; self.size];
        for (i, &e) in elems.iter().enumerate() {
            pos[e] = i;
        }
        let m = elems.len();
        let tables = BIN_OPS.map(|op| {
            let mut t = Vec::with_capacity(m * m);
            for &x in &elems {
                for &y in &elems {
                    t.push(pos[self.op(op, x, y)]);
                }
            }
            t
        });
        let neg = elems.iter().map(|&x| pos[self.neg(x)]).collect();
        let names = self.names.as_ref().map(|n| elems.iter().map(|&e| n[e].clone()).collect());
        let sub = FiniteAlgebra::new_unchecked(m, tables, neg, pos[self.bot], pos[self.top], names);
        Ok((sub, elems))
    }

    /// Every subuniverse, by breadth-first extension of known subuniverses by
    /// one outside element at a time. Sorted by size, then by elements.
    pub fn all_subalgebras(&self) -> Vec<ElemSet> {
        let start = self.generate(&[]);
        let mut seen: HashSet<ElemSet> = HashSet::new();
        seen.insert(start.clone());
        let mut frontier = vec![start];
        while let Some(s) = frontier.pop() {
            for x in 0..self.size {
                if s.contains(x) {
                    continue;
                }
                let t = self.generate_over(&s, &[x]);
                if seen.insert(t.clone()) {
                    frontier.push(t);
                }
            }
        }
        let mut out: Vec<ElemSet> = seen.into_iter().collect();
        sort_sets(&mut out);
        out
    }

    /// A small generating set chosen greedily in index order.
    pub fn generating_set(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut cur = self.generate(&[]);
        for x in 0..self.size {
            if !cur.contains(x) {
                gens.push(x);
                cur = self.generate_over(&cur, &[x]);
            }
        }
        gens
    }
}

pub(crate) fn sort_sets(sets: &mut [ElemSet]) {
    sets.sort_by_cached_key(|s| (s.count_ones(..), s.ones().collect::<Vec<_>>()));
}

fn check_lattice(n: usize, meet: &[usize], join: &[usize], which: &str) -> Result<()> {
    let m = |a: usize, b: usize| meet[a * n + b];
    let j = |a: usize, b: usize| join[a * n + b];
    for a in 0..n {
        if m(a, a) != a || j(a, a) != a {
            return Err(Error::InvalidAlgebra(format!("{which} operations not idempotent at {a}")));
        }
        for b in 0..n {
            if m(a, b) != m(b, a) || j(a, b) != j(b, a) {
                return Err(Error::InvalidAlgebra(format!("{which} operations not commutative at ({a},{b})")));
            }
            if m(a, j(a, b)) != a || j(a, m(a, b)) != a {
                return Err(Error::InvalidAlgebra(format!("{which} absorption fails at ({a},{b})")));
            }
            for c in 0..n {
                if m(a, m(b, c)) != m(m(a, b), c) || j(a, j(b, c)) != j(j(a, b), c) {
                    return Err(Error::InvalidAlgebra(format!(
                        "{which} operations not associative at ({a},{b},{c})"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// True iff `table: a → b` preserves all seven operations.
pub fn is_homomorphism(a: &FiniteAlgebra, b: &FiniteAlgebra, table: &[usize]) -> bool {
    if table.len() != a.size() || table.iter().any(|&v| v >= b.size()) {
        return false;
    }
    if table[a.bot()] != b.bot() || table[a.top()] != b.top() {
        return false;
    }
    for x in 0..a.size() {
        if table[a.neg(x)] != b.neg(table[x]) {
            return false;
        }
        for y in 0..a.size() {
            for op in BIN_OPS {
                if table[a.op(op, x, y)] != b.op(op, table[x], table[y]) {
                    return false;
                }
            }
        }
    }
    true
}

/// A partial map `a → b` grown by closing under the operations; records a
/// conflict as soon as two terms demand different images.
#[derive(Clone)]
struct PartialHom {
    map: Vec<usize>,
    mapped: Vec<usize>,
    processed: usize,
    used: Option<Vec<bool>>,
}

impl PartialHom {
    fn new(size: usize, cod_size: usize, injective: bool) -> Self {
        PartialHom {
            map: vec![usize::MAX; size],
            mapped: Vec::new(),
            processed: 0,
            used: injective.then(|| vec![false; cod_size]),
        }
    }

    fn set(&mut self, x: usize, v: usize) -> bool {
        if self.map[x] == usize::MAX {
            if let Some(used) = &mut self.used {
                if std::mem::replace(&mut used[v], true) {
                    return false;
                }
            }
            self.map[x] = v;
            self.mapped.push(x);
            true
        } else {
            self.map[x] == v
        }
    }

    fn propagate(&mut self, a: &FiniteAlgebra, b: &FiniteAlgebra) -> bool {
        while self.processed < self.mapped.len() {
            let i = self.processed;
            let x = self.mapped[i];
            let fx = self.map[x];
            if !self.set(a.neg(x), b.neg(fx)) {
                return false;
            }
            for j in 0..=i {
                let y = self.mapped[j];
                let fy = self.map[y];
                for op in BIN_OPS {
                    if !self.set(a.op(op, x, y), b.op(op, fx, fy)) || !self.set(a.op(op, y, x), b.op(op, fy, fx)) {
                        return false;
                    }
                }
            }
            self.processed += 1;
        }
        true
    }
}

/// Every homomorphism `a → b`, as image tables in lexicographic order.
///
/// Images of a greedy generating set are chosen by backtracking; after each
/// choice the partial map is closed under all operations and rejected on
/// the first conflict.
pub fn homs(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Vec<Vec<usize>> {
    let gens = a.generating_set();
    let mut start = PartialHom::new(a.size(), b.size(), false);
    let mut out = Vec::new();
    if start.set(a.bot(), b.bot()) && start.set(a.top(), b.top()) && start.propagate(a, b) {
        hom_rec(a, b, &gens, 0, start, &|_, _| true, &mut out, usize::MAX);
    }
    out.sort();
    out
}

#[allow(clippy::too_many_arguments)]
fn hom_rec(
    a: &FiniteAlgebra,
    b: &FiniteAlgebra,
    gens: &[usize],
    depth: usize,
    state: PartialHom,
    admissible: &dyn Fn(usize, usize) -> bool,
    out: &mut Vec<Vec<usize>>,
    limit: usize,
) {
    if out.len() >= limit {
        return;
    }
    if depth == gens.len() {
        if state.mapped.len() == a.size() {
            out.push(state.map);
        }
        return;
    }
    let g = gens[depth];
    if state.map[g] != usize::MAX {
        hom_rec(a, b, gens, depth + 1, state, admissible, out, limit);
        return;
    }
    for v in 0..b.size() {
        if !admissible(g, v) {
            continue;
        }
        let mut next = state.clone();
        if next.set(g, v) && next.propagate(a, b) {
            hom_rec(a, b, gens, depth + 1, next, admissible, out, limit);
        }
    }
}

/// Default upper bound on the universe size for isomorphism search.
pub const ISO_SEARCH_CAP: usize = 200;

/// An isomorphism `a → b`, if one exists. Candidate images are restricted
/// to elements with the same order-rank profile and the same ¬-fixedness.
pub fn find_isomorphism(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Result<Option<Vec<usize>>> {
    find_isomorphism_capped(a, b, ISO_SEARCH_CAP)
}

pub fn find_isomorphism_capped(a: &FiniteAlgebra, b: &FiniteAlgebra, cap: usize) -> Result<Option<Vec<usize>>> {
    if a.size() != b.size() {
        return Ok(None);
    }
    if a.size() > cap {
        return Err(Error::SizeOverflow { size: a.size() as u128, limit: cap as u128 });
    }
    let inv_a = invariants(a);
    let inv_b = invariants(b);
    let mut sa = inv_a.clone();
    let mut sb = inv_b.clone();
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return Ok(None);
    }
    let gens = a.generating_set();
    let mut start = PartialHom::new(a.size(), b.size(), true);
    if !(start.set(a.bot(), b.bot()) && start.set(a.top(), b.top()) && start.propagate(a, b)) {
        return Ok(None);
    }
    let admissible = |x: usize, y: usize| inv_a[x] == inv_b[y];
    let mut out = Vec::new();
    hom_rec(a, b, &gens, 0, start, &admissible, &mut out, 1);
    Ok(out.pop().filter(|t| is_homomorphism(a, b, t)))
}

fn invariants(a: &FiniteAlgebra) -> Vec<(usize, usize, usize, usize, bool)> {
    (0..a.size())
        .map(|x| {
            let kd = (0..a.size()).filter(|&y| a.k_leq(y, x)).count();
            let ku = (0..a.size()).filter(|&y| a.k_leq(x, y)).count();
            let td = (0..a.size()).filter(|&y| a.t_leq(y, x)).count();
            let tu = (0..a.size()).filter(|&y| a.t_leq(x, y)).count();
            (kd, ku, td, tu, a.neg(x) == x)
        })
        .collect()
}

/// An equivalence relation stored as canonical block labels: block ids are
/// assigned in order of first appearance, so each block is named by its
/// least element's position.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Congruence {
    labels: Vec<usize>,
}

impl Congruence {
    pub fn from_labels(raw: &[usize]) -> Self {
        let mut rename = std::collections::HashMap::new();
        let labels = raw
            .iter()
            .map(|l| {
                let next = rename.len();
                *rename.entry(*l).or_insert(next)
            })
            .collect();
        Congruence { labels }
    }

    pub fn identity(n: usize) -> Self {
        Congruence { labels: (0..n).collect() }
    }

    pub fn total(n: usize) -> Self {
        Congruence { labels: vec![0; n] }
    }

    /// The kernel of a map given by its table.
    pub fn kernel(table: &[usize]) -> Self {
        Congruence::from_labels(table)
    }

    /// Generated by a list of pairs (equivalence closure only).
    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut uf = UnionFind::new(n);
        for (a, b) in pairs {
            uf.union(a, b);
        }
        uf.to_congruence()
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, a: usize) -> usize {
        self.labels[a]
    }

    pub fn related(&self, a: usize, b: usize) -> bool {
        self.labels[a] == self.labels[b]
    }

    pub fn num_blocks(&self) -> usize {
        self.labels.iter().max().map_or(0, |m| m + 1)
    }

    /// Blocks in label order, each listing its elements increasingly.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_blocks()];
        for (x, &l) in self.labels.iter().enumerate() {
            out[l].push(x);
        }
        out
    }

    /// `self ⊆ other` as relations.
    pub fn is_finer(&self, other: &Congruence) -> bool {
        let n = self.size();
        (0..n).all(|a| (0..n).all(|b| !self.related(a, b) || other.related(a, b)))
    }

    pub fn join(&self, other: &Congruence) -> Congruence {
        let mut uf = UnionFind::new(self.size());
        for c in [self, other] {
            let mut first = vec![usize::MAX; c.num_blocks()];
            for x in 0..c.size() {
                let l = c.labels[x];
                if first[l] == usize::MAX {
                    first[l] = x;
                } else {
                    uf.union(x, first[l]);
                }
            }
        }
        uf.to_congruence()
    }

    pub fn meet(&self, other: &Congruence) -> Congruence {
        let pairs: Vec<(usize, usize)> = self.labels.iter().zip(&other.labels).map(|(&a, &b)| (a, b)).collect();
        Congruence::from_labels(&pairs.iter().map(|p| p.0 * self.size() + p.1).collect::<Vec<_>>())
    }

    pub fn is_compatible(&self, a: &FiniteAlgebra) -> bool {
        let n = a.size();
        for x in 0..n {
            for y in 0..n {
                if !self.related(x, y) {
                    continue;
                }
                if !self.related(a.neg(x), a.neg(y)) {
                    return false;
                }
                for z in 0..n {
                    for op in BIN_OPS {
                        if !self.related(a.op(op, x, z), a.op(op, y, z)) || !self.related(a.op(op, z, x), a.op(op, z, y)) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    fn to_congruence(&mut self) -> Congruence {
        let roots: Vec<usize> = (0..self.parent.len()).map(|x| self.find(x)).collect();
        Congruence::from_labels(&roots)
    }
}

/// The least congruence identifying each given pair.
pub fn congruence_generated_by(a: &FiniteAlgebra, pairs: &[(usize, usize)]) -> Congruence {
    let n = a.size();
    let mut uf = UnionFind::new(n);
    let mut work: Vec<(usize, usize)> = Vec::new();
    for &(x, y) in pairs {
        if uf.union(x, y) {
            work.push((x, y));
        }
    }
    while let Some((x, y)) = work.pop() {
        let mut push = |u: usize, v: usize, uf: &mut UnionFind| {
            if uf.union(u, v) {
                work.push((u, v));
            }
        };
        push(a.neg(x), a.neg(y), &mut uf);
        for z in 0..n {
            for op in BIN_OPS {
                push(a.op(op, x, z), a.op(op, y, z), &mut uf);
                push(a.op(op, z, x), a.op(op, z, y), &mut uf);
            }
        }
    }
    uf.to_congruence()
}

/// All congruences, sorted from the identity (most blocks) to the total
/// relation.
///
/// Blocks of a congruence are convex in the knowledge lattice, so every
/// congruence is a join of congruences generated by single knowledge
/// covers; only those are computed before closing under joins.
pub fn congruence_lattice(a: &FiniteAlgebra) -> Vec<Congruence> {
    let n = a.size();
    let mut all: BTreeSet<Congruence> = BTreeSet::new();
    all.insert(Congruence::identity(n));
    for (x, y) in a.knowledge_order().hasse_edges() {
        all.insert(congruence_generated_by(a, &[(x, y)]));
    }
    loop {
        let current: Vec<Congruence> = all.iter().cloned().collect();
        let mut grew = false;
        for i in 0..current.len() {
            for j in i + 1..current.len() {
                if all.insert(current[i].join(&current[j])) {
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    let mut out: Vec<Congruence> = all.into_iter().collect();
    out.sort_by(|p, q| q.num_blocks().cmp(&p.num_blocks()).then_with(|| p.cmp(q)));
    out
}

/// The quotient algebra. Block `i` is the block with label `i`, represented
/// by its least element.
pub fn quotient(a: &FiniteAlgebra, theta: &Congruence) -> Result<FiniteAlgebra> {
    if theta.size() != a.size() {
        return Err(Error::LengthMismatch { expected: a.size(), found: theta.size() });
    }
    if !theta.is_compatible(a) {
        return Err(Error::InvalidAlgebra("relation is not a congruence".into()));
    }
    let blocks = theta.blocks();
    let reps: Vec<usize> = blocks.iter().map(|b| b[0]).collect();
    let m = reps.len();
    let tables = BIN_OPS.map(|op| {
        let mut t = Vec::with_capacity(m * m);
        for &x in &reps {
            for &y in &reps {
                t.push(theta.label(a.op(op, x, y)));
            }
        }
        t
    });
    let neg = reps.iter().map(|&x| theta.label(a.neg(x))).collect();
    let names = a.names().map(|n| reps.iter().map(|&r| n[r].clone()).collect());
    Ok(FiniteAlgebra::new_unchecked(m, tables, neg, theta.label(a.bot()), theta.label(a.top()), names))
}

/// Whether the intersection of all non-identity congruences is itself
/// non-identity.
pub fn is_subdirectly_irreducible(a: &FiniteAlgebra) -> Result<bool> {
    if a.size() == 1 {
        return Err(Error::TrivialAlgebra);
    }
    let id = Congruence::identity(a.size());
    let nontrivial: Vec<Congruence> = congruence_lattice(a).into_iter().filter(|c| *c != id).collect();
    let monolith = nontrivial
        .iter()
        .fold(Congruence::total(a.size()), |acc, c| acc.meet(c));
    Ok(monolith != id)
}

/// Digits of a mixed-radix index, first position most significant.
pub fn tuple_digits(sizes: &[usize], mut idx: usize) -> Vec<usize> {
    let mut d = vec![0; sizes.len()];
    for k in (0..sizes.len()).rev() {
        d[k] = idx % sizes[k];
        idx /= sizes[k];
    }
    d
}

pub fn tuple_index(sizes: &[usize], digits: &[usize]) -> usize {
    digits.iter().zip(sizes).fold(0, |acc, (x, s)| acc * s + x)
}

/// Direct product. Element `i` is the tuple `tuple_digits(sizes, i)`.
pub fn product(factors: &[&FiniteAlgebra], limit: usize) -> Result<FiniteAlgebra> {
    let sizes: Vec<usize> = factors.iter().map(|a| a.size()).collect();
    let mut total: u128 = 1;
    for &s in &sizes {
        total = total.saturating_mul(s as u128);
    }
    if total > limit as u128 {
        return Err(Error::SizeOverflow { size: total, limit: limit as u128 });
    }
    let total = total as usize;
    let coords: Vec<Vec<usize>> = (0..total).map(|i| tuple_digits(&sizes, i)).collect();
    let combine = |f: &dyn Fn(usize, &FiniteAlgebra, usize) -> usize, i: usize| {
        let d: Vec<usize> = factors.iter().enumerate().map(|(k, a)| f(k, a, coords[i][k])).collect();
        tuple_index(&sizes, &d)
    };
    let tables = BIN_OPS.map(|op| {
        let mut t = Vec::with_capacity(total * total);
        for i in 0..total {
            for j in 0..total {
                let d: Vec<usize> = factors
                    .iter()
                    .enumerate()
                    .map(|(k, a)| a.op(op, coords[i][k], coords[j][k]))
                    .collect();
                t.push(tuple_index(&sizes, &d));
            }
        }
        t
    });
    let neg = (0..total).map(|i| combine(&|_, a, x| a.neg(x), i)).collect();
    let bot = tuple_index(&sizes, &factors.iter().map(|a| a.bot()).collect::<Vec<_>>());
    let top = tuple_index(&sizes, &factors.iter().map(|a| a.top()).collect::<Vec<_>>());
    let names = if factors.iter().all(|a| a.names().is_some()) {
        Some(
            coords
                .iter()
                .map(|d| {
                    let parts: Vec<String> = factors.iter().zip(d).map(|(a, &x)| a.name(x)).collect();
                    format!("({})", parts.join(","))
                })
                .collect(),
        )
    } else {
        None
    };
    Ok(FiniteAlgebra::new_unchecked(total, tables, neg, bot, top, names))
}

pub fn power(a: &FiniteAlgebra, k: usize, limit: usize) -> Result<FiniteAlgebra> {
    product(&vec![a; k], limit)
}

/// The one-element algebra.
pub fn trivial_algebra() -> FiniteAlgebra {
    FiniteAlgebra::new_unchecked(1, BIN_OPS.map(|_| vec![0]), vec![0], 0, 0, None)
}

/// Elements of `a × b` (indexed as by [`product`]) whose coordinates are
/// related by `rel`.
pub fn relation_as_set(a_size: usize, b_size: usize, rel: impl Fn(usize, usize) -> bool) -> ElemSet {
    set_from(a_size * b_size, (0..a_size * b_size).filter(|&i| rel(i / b_size, i % b_size)))
}
