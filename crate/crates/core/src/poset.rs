//! Finite posets and quasi-orders.
//!
//! Relations are stored as full boolean matrices, always reflexive and
//! transitively closed. Everything here is finite and discrete, so clopen
//! up-sets are just up-sets and every map is continuous.

use std::collections::HashMap;
use std::fmt::Write as _;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

/// A subset of an indexed universe.
pub type ElemSet = FixedBitSet;

pub(crate) fn set_from(size: usize, elems: impl IntoIterator<Item = usize>) -> ElemSet {
    let mut s = FixedBitSet::with_capacity(size);
    for e in elems {
        s.insert(e);
    }
    s
}

/// A reflexive, transitive relation on `0..size`. `leq(i, j)` means i ≼ j.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuasiOrder {
    size: usize,
    rel: Vec<bool>,
}

impl QuasiOrder {
    /// Reflexive-transitive closure of the given pairs.
    pub fn from_pairs(size: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut rel = vec![false; size * size];
        for i in 0..size {
            rel[i * size + i] = true;
        }
        for (a, b) in pairs {
            for x in [a, b] {
                if x >= size {
                    return Err(Error::IndexOutOfRange { index: x, size });
                }
            }
            rel[a * size + b] = true;
        }
        warshall(size, &mut rel);
        Ok(QuasiOrder { size, rel })
    }

    /// Build from a predicate, validating reflexivity and transitivity
    /// without closing.
    pub fn from_fn(size: usize, f: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let mut rel = vec![false; size * size];
        for i in 0..size {
            for j in 0..size {
                rel[i * size + j] = f(i, j);
            }
        }
        let q = QuasiOrder { size, rel };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.size;
        for i in 0..n {
            if !self.leq(i, i) {
                return Err(Error::NotReflexive(i));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if !self.leq(i, j) {
                    continue;
                }
                for k in 0..n {
                    if self.leq(j, k) && !self.leq(i, k) {
                        return Err(Error::NotTransitive(i, j, k));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.rel[i * self.size + j]
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.antisymmetry_violation().is_none()
    }

    fn antisymmetry_violation(&self) -> Option<(usize, usize)> {
        for i in 0..self.size {
            for j in i + 1..self.size {
                if self.leq(i, j) && self.leq(j, i) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// All related pairs, reflexive ones included, in row-major order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.size {
            for j in 0..self.size {
                if self.leq(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn converse(&self) -> QuasiOrder {
        QuasiOrder::from_fn(self.size, |i, j| self.leq(j, i)).expect("converse of a quasi-order")
    }

    /// `self ⊆ other` as sets of pairs.
    pub fn is_contained_in(&self, other: &QuasiOrder) -> bool {
        self.size == other.size && self.rel.iter().zip(&other.rel).all(|(a, b)| !*a || *b)
    }

    pub fn into_poset(self) -> Result<Poset> {
        if let Some((a, b)) = self.antisymmetry_violation() {
            return Err(Error::NotAntisymmetric(a, b));
        }
        Ok(Poset(self))
    }
}

fn warshall(n: usize, rel: &mut [bool]) {
    for k in 0..n {
        for i in 0..n {
            if !rel[i * n + k] {
                continue;
            }
            for j in 0..n {
                if rel[k * n + j] {
                    rel[i * n + j] = true;
                }
            }
        }
    }
}

/// A finite partial order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poset(QuasiOrder);

impl Poset {
    /// Reflexive-transitive closure of `pairs`, then an antisymmetry check.
    pub fn from_pairs(size: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        QuasiOrder::from_pairs(size, pairs)?.into_poset()
    }

    pub fn from_fn(size: usize, f: impl Fn(usize, usize) -> bool) -> Result<Self> {
        QuasiOrder::from_fn(size, f)?.into_poset()
    }

    pub fn antichain(size: usize) -> Self {
        Poset::from_pairs(size, []).unwrap()
    }

    pub fn chain(size: usize) -> Self {
        Poset::from_fn(size, |i, j| i <= j).unwrap()
    }

    pub fn empty() -> Self {
        Poset::antichain(0)
    }

    /// Disjoint union; parts are laid out one after another.
    pub fn disjoint_union(parts: &[&Poset]) -> Self {
        let mut offsets = Vec::with_capacity(parts.len());
        let mut total = 0;
        for p in parts {
            offsets.push(total);
            total += p.size();
        }
        let mut pairs = Vec::new();
        for (p, off) in parts.iter().zip(&offsets) {
            for (a, b) in p.as_quasi_order().pairs() {
                pairs.push((a + off, b + off));
            }
        }
        Poset::from_pairs(total, pairs).unwrap()
    }

    /// Cartesian product with the coordinatewise order; mixed-radix indexing
    /// with the first factor most significant.
    pub fn product(factors: &[&Poset]) -> Self {
        let sizes: Vec<usize> = factors.iter().map(|p| p.size()).collect();
        let total: usize = sizes.iter().product();
        let decode = |mut idx: usize| {
            let mut digits = vec![0; sizes.len()];
            for k in (0..sizes.len()).rev() {
                digits[k] = idx % sizes[k];
                idx /= sizes[k];
            }
            digits
        };
        let coords: Vec<Vec<usize>> = (0..total).map(decode).collect();
        Poset::from_fn(total, |i, j| {
            factors
                .iter()
                .enumerate()
                .all(|(k, p)| p.leq(coords[i][k], coords[j][k]))
        })
        .unwrap()
    }

    pub fn as_quasi_order(&self) -> &QuasiOrder {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.size
    }

    #[inline]
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.0.leq(i, j)
    }

    #[inline]
    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.leq(i, j)
    }

    pub fn comparable(&self, i: usize, j: usize) -> bool {
        self.leq(i, j) || self.leq(j, i)
    }

    pub fn up_closure(&self, set: &ElemSet) -> ElemSet {
        let mut out = FixedBitSet::with_capacity(self.size());
        for x in set.ones() {
            for y in 0..self.size() {
                if self.leq(x, y) {
                    out.insert(y);
                }
            }
        }
        out
    }

    pub fn down_closure(&self, set: &ElemSet) -> ElemSet {
        let mut out = FixedBitSet::with_capacity(self.size());
        for x in set.ones() {
            for y in 0..self.size() {
                if self.leq(y, x) {
                    out.insert(y);
                }
            }
        }
        out
    }

    pub fn principal_up(&self, x: usize) -> ElemSet {
        set_from(self.size(), (0..self.size()).filter(|&y| self.leq(x, y)))
    }

    pub fn principal_down(&self, x: usize) -> ElemSet {
        set_from(self.size(), (0..self.size()).filter(|&y| self.leq(y, x)))
    }

    pub fn is_up_set(&self, set: &ElemSet) -> bool {
        set.ones()
            .all(|x| (0..self.size()).all(|y| !self.leq(x, y) || set.contains(y)))
    }

    pub fn is_down_set(&self, set: &ElemSet) -> bool {
        set.ones()
            .all(|x| (0..self.size()).all(|y| !self.leq(y, x) || set.contains(y)))
    }

    /// Cover pairs (a, b): a < b with nothing strictly between.
    pub fn hasse_edges(&self) -> Vec<(usize, usize)> {
        let n = self.size();
        let mut edges = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.lt(a, b) && !(0..n).any(|c| self.lt(a, c) && self.lt(c, b)) {
                    edges.push((a, b));
                }
            }
        }
        edges
    }

    /// Elements sorted so that every element appears after everything below it.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.size()).collect();
        let downs: Vec<usize> = (0..self.size())
            .map(|x| (0..self.size()).filter(|&y| self.leq(y, x)).count())
            .collect();
        order.sort_by_key(|&x| (downs[x], x));
        order
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.size())
            .filter(|&x| !(0..self.size()).any(|y| self.lt(y, x)))
            .collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.size())
            .filter(|&x| !(0..self.size()).any(|y| self.lt(x, y)))
            .collect()
    }

    /// Induced suborder on `elems`, re-indexed in the given order.
    pub fn restrict(&self, elems: &[usize]) -> Poset {
        Poset::from_fn(elems.len(), |i, j| self.leq(elems[i], elems[j])).unwrap()
    }

    pub fn dual(&self) -> Poset {
        Poset(self.0.converse())
    }

    /// Connected components of the comparability graph. Blocks are sorted by
    /// their least element and list elements in increasing order.
    pub fn order_components(&self) -> Vec<Vec<usize>> {
        let n = self.size();
        let mut comp = vec![usize::MAX; n];
        let mut blocks = Vec::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = blocks.len();
            let mut block = vec![start];
            comp[start] = id;
            let mut i = 0;
            while i < block.len() {
                let x = block[i];
                for y in 0..n {
                    if comp[y] == usize::MAX && self.comparable(x, y) {
                        comp[y] = id;
                        block.push(y);
                    }
                }
                i += 1;
            }
            block.sort_unstable();
            blocks.push(block);
        }
        blocks
    }

    /// Every up-set, each exactly once, as element subsets.
    ///
    /// Elements are decided from the top of a linear extension downwards, so
    /// an element may be included only once everything above it is; every
    /// leaf of the search is an up-set.
    pub fn up_sets(&self) -> Vec<ElemSet> {
        let mut order = self.linear_extension();
        order.reverse();
        let uppers: Vec<Vec<usize>> = order
            .iter()
            .map(|&x| (0..self.size()).filter(|&y| self.lt(x, y)).collect())
            .collect();
        let mut out = Vec::new();
        let mut current = FixedBitSet::with_capacity(self.size());
        self.up_sets_rec(&order, &uppers, 0, &mut current, &mut out);
        out
    }

    fn up_sets_rec(
        &self,
        order: &[usize],
        uppers: &[Vec<usize>],
        depth: usize,
        current: &mut ElemSet,
        out: &mut Vec<ElemSet>,
    ) {
        if depth == order.len() {
            out.push(current.clone());
            return;
        }
        let x = order[depth];
        self.up_sets_rec(order, uppers, depth + 1, current, out);
        if uppers[depth].iter().all(|&y| current.contains(y)) {
            current.insert(x);
            self.up_sets_rec(order, uppers, depth + 1, current, out);
            current.set(x, false);
        }
    }

    /// Number of up-sets, without materialising them.
    ///
    /// Splits on order components (product rule) and otherwise branches on a
    /// pivot x: up-sets containing x correspond to up-sets of P \ ↑x, those
    /// avoiding x to up-sets of P \ ↓x. Sub-results are memoised by the
    /// remaining element set. Returns `None` on u128 overflow.
    pub fn count_up_sets(&self) -> Option<u128> {
        let n = self.size();
        let ups: Vec<ElemSet> = (0..n).map(|x| self.principal_up(x)).collect();
        let downs: Vec<ElemSet> = (0..n).map(|x| self.principal_down(x)).collect();
        let mut all = FixedBitSet::with_capacity(n);
        all.insert_range(..);
        let mut memo = HashMap::new();
        UpSetCounter { ups: &ups, downs: &downs }.count(all, &mut memo)
    }
}

struct UpSetCounter<'a> {
    ups: &'a [ElemSet],
    downs: &'a [ElemSet],
}

impl UpSetCounter<'_> {
    fn components(&self, rest: &ElemSet) -> Vec<ElemSet> {
        let mut unseen = rest.clone();
        let mut out = Vec::new();
        while let Some(start) = unseen.minimum() {
            let mut comp = FixedBitSet::with_capacity(rest.len());
            let mut stack = vec![start];
            unseen.set(start, false);
            comp.insert(start);
            while let Some(x) = stack.pop() {
                let mut nbrs = self.ups[x].clone();
                nbrs.union_with(&self.downs[x]);
                nbrs.intersect_with(&unseen);
                for y in nbrs.ones() {
                    comp.insert(y);
                    stack.push(y);
                }
                unseen.difference_with(&nbrs);
            }
            out.push(comp);
        }
        out
    }

    fn count(&self, rest: ElemSet, memo: &mut HashMap<ElemSet, u128>) -> Option<u128> {
        let len = rest.count_ones(..);
        if len == 0 {
            return Some(1);
        }
        if len == 1 {
            return Some(2);
        }
        if let Some(&c) = memo.get(&rest) {
            return Some(c);
        }
        let comps = self.components(&rest);
        let result = if comps.len() > 1 {
            let mut acc: u128 = 1;
            for c in comps {
                acc = acc.checked_mul(self.count(c, memo)?)?;
            }
            acc
        } else {
            // Pivot on the element comparable to the most remaining elements.
            let pivot = rest
                .ones()
                .max_by_key(|&x| {
                    let mut c = self.ups[x].clone();
                    c.union_with(&self.downs[x]);
                    c.intersect_with(&rest);
                    (c.count_ones(..), usize::MAX - x)
                })
                .unwrap();
            let mut without_up = rest.clone();
            without_up.difference_with(&self.ups[pivot]);
            let mut without_down = rest.clone();
            without_down.difference_with(&self.downs[pivot]);
            self.count(without_up, memo)?
                .checked_add(self.count(without_down, memo)?)?
        };
        memo.insert(rest, result);
        Some(result)
    }
}

/// An order-preserving map between posets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneMap {
    dom: Poset,
    cod: Poset,
    table: Vec<usize>,
}

impl MonotoneMap {
    pub fn new(dom: Poset, cod: Poset, table: Vec<usize>) -> Result<Self> {
        if table.len() != dom.size() {
            return Err(Error::LengthMismatch { expected: dom.size(), found: table.len() });
        }
        if let Some(&bad) = table.iter().find(|&&v| v >= cod.size()) {
            return Err(Error::IndexOutOfRange { index: bad, size: cod.size() });
        }
        for x in 0..dom.size() {
            for y in 0..dom.size() {
                if dom.leq(x, y) && !cod.leq(table[x], table[y]) {
                    return Err(Error::NotMonotone(x, y));
                }
            }
        }
        Ok(MonotoneMap { dom, cod, table })
    }

    pub fn identity(p: &Poset) -> Self {
        MonotoneMap { dom: p.clone(), cod: p.clone(), table: (0..p.size()).collect() }
    }

    pub fn dom(&self) -> &Poset {
        &self.dom
    }

    pub fn cod(&self) -> &Poset {
        &self.cod
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &MonotoneMap) -> Result<MonotoneMap> {
        if self.cod != other.dom {
            return Err(Error::LengthMismatch { expected: self.cod.size(), found: other.dom.size() });
        }
        let table = self.table.iter().map(|&x| other.table[x]).collect();
        Ok(MonotoneMap { dom: self.dom.clone(), cod: other.cod.clone(), table })
    }

    /// True iff every order component of the domain has a one-point image.
    pub fn is_semi_constant(&self) -> bool {
        self.semi_constancy_violation().is_none()
    }

    fn semi_constancy_violation(&self) -> Option<usize> {
        for block in self.dom.order_components() {
            let v = self.table[block[0]];
            if let Some(&x) = block.iter().find(|&&x| self.table[x] != v) {
                return Some(x);
            }
        }
        None
    }

    pub fn check_semi_constant(&self) -> Result<()> {
        match self.semi_constancy_violation() {
            Some(x) => Err(Error::NotSemiConstant(x)),
            None => Ok(()),
        }
    }

    /// Preimage of a subset of the codomain.
    pub fn preimage(&self, set: &ElemSet) -> ElemSet {
        set_from(self.dom.size(), (0..self.dom.size()).filter(|&x| set.contains(self.table[x])))
    }
}

/// `s ⊕_φ t`: the disjoint union S then T with `φ(y) ≤ y` added for every
/// y in T, transitively closed. `phi` must be semi-constant.
pub fn restricted_linear_sum(s: &Poset, t: &Poset, phi: &MonotoneMap) -> Result<Poset> {
    if phi.dom() != t || phi.cod() != s {
        return Err(Error::LengthMismatch { expected: t.size(), found: phi.dom().size() });
    }
    phi.check_semi_constant()?;
    let off = s.size();
    let mut pairs = Vec::new();
    pairs.extend(s.as_quasi_order().pairs());
    pairs.extend(t.as_quasi_order().pairs().into_iter().map(|(a, b)| (a + off, b + off)));
    pairs.extend((0..t.size()).map(|y| (phi.apply(y), y + off)));
    Poset::from_pairs(off + t.size(), pairs)
}

/// Index of an element of a doubled layered poset.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DoubledPoint {
    pub layer: usize,
    /// 0 for the first copy, 1 for the second.
    pub copy: usize,
    pub elem: usize,
}

/// The doubling of the iterated restricted linear sum of `layers` along
/// `links` (`links[i-1]: layers[i] → layers[i-1]`).
///
/// Layout: layer-major, then copy, then element. Within each copy the layer
/// keeps its order; every copy of layer i sits above both copies of layer
/// i-1 through its link; the result is transitively closed.
pub fn doubling(layers: &[Poset], links: &[MonotoneMap]) -> Result<(Poset, Vec<DoubledPoint>)> {
    if links.len() + 1 != layers.len() {
        return Err(Error::LengthMismatch { expected: layers.len().saturating_sub(1), found: links.len() });
    }
    for (i, link) in links.iter().enumerate() {
        if link.dom() != &layers[i + 1] || link.cod() != &layers[i] {
            return Err(Error::LengthMismatch { expected: layers[i + 1].size(), found: link.dom().size() });
        }
        link.check_semi_constant()?;
    }
    let mut points = Vec::new();
    let mut base = Vec::with_capacity(layers.len());
    for (layer, p) in layers.iter().enumerate() {
        base.push(points.len());
        for copy in 0..2 {
            for elem in 0..p.size() {
                points.push(DoubledPoint { layer, copy, elem });
            }
        }
    }
    let idx = |layer: usize, copy: usize, elem: usize| base[layer] + copy * layers[layer].size() + elem;
    let mut pairs = Vec::new();
    for (layer, p) in layers.iter().enumerate() {
        for copy in 0..2 {
            for (a, b) in p.as_quasi_order().pairs() {
                pairs.push((idx(layer, copy, a), idx(layer, copy, b)));
            }
        }
    }
    for (i, link) in links.iter().enumerate() {
        let upper = i + 1;
        for y in 0..layers[upper].size() {
            for cu in 0..2 {
                for cl in 0..2 {
                    pairs.push((idx(i, cl, link.apply(y)), idx(upper, cu, y)));
                }
            }
        }
    }
    let poset = Poset::from_pairs(points.len(), pairs)?;
    Ok((poset, points))
}

/// Graphviz rendering of the Hasse diagram, edges pointing upwards.
pub fn hasse_dot(p: &Poset, name: &str, labels: Option<&[String]>) -> String {
    let mut out = String::new();
    writeln!(out, "digraph \"{name}\" {{").unwrap();
    writeln!(out, "  rankdir=BT;").unwrap();
    writeln!(out, "  node [shape=plaintext];").unwrap();
    for i in 0..p.size() {
        let label = labels.and_then(|l| l.get(i)).cloned().unwrap_or_else(|| i.to_string());
        writeln!(out, "  n{i} [label=\"{label}\"];").unwrap();
    }
    for (a, b) in p.hasse_edges() {
        writeln!(out, "  n{a} -> n{b} [arrowhead=none];").unwrap();
    }
    out.push_str("}\n");
    out
}

/// Order isomorphisms `p → q`, at most `limit` of them, in lexicographic
/// order of their tables.
pub fn poset_isomorphisms(p: &Poset, q: &Poset, limit: usize) -> Vec<Vec<usize>> {
    let n = p.size();
    if n != q.size() {
        return Vec::new();
    }
    let signature = |r: &Poset, x: usize| {
        let below = (0..n).filter(|&y| r.leq(y, x)).count();
        let above = (0..n).filter(|&y| r.leq(x, y)).count();
        (below, above)
    };
    let sig_p: Vec<_> = (0..n).map(|x| signature(p, x)).collect();
    let sig_q: Vec<_> = (0..n).map(|x| signature(q, x)).collect();
    let mut sorted_p = sig_p.clone();
    let mut sorted_q = sig_q.clone();
    sorted_p.sort_unstable();
    sorted_q.sort_unstable();
    if sorted_p != sorted_q {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut table = vec![usize::MAX; n];
    let mut used = vec![false; n];
    iso_rec(p, q, &sig_p, &sig_q, 0, &mut table, &mut used, &mut out, limit);
    out
}

#[allow(clippy::too_many_arguments)]
fn iso_rec(
    p: &Poset,
    q: &Poset,
    sig_p: &[(usize, usize)],
    sig_q: &[(usize, usize)],
    x: usize,
    table: &mut Vec<usize>,
    used: &mut Vec<bool>,
    out: &mut Vec<Vec<usize>>,
    limit: usize,
) {
    if out.len() >= limit {
        return;
    }
    if x == p.size() {
        out.push(table.clone());
        return;
    }
    for y in 0..q.size() {
        if used[y] || sig_p[x] != sig_q[y] {
            continue;
        }
        let consistent = (0..x).all(|z| {
            p.leq(z, x) == q.leq(table[z], y) && p.leq(x, z) == q.leq(y, table[z])
        });
        if !consistent {
            continue;
        }
        table[x] = y;
        used[y] = true;
        iso_rec(p, q, sig_p, sig_q, x + 1, table, used, out, limit);
        used[y] = false;
        table[x] = usize::MAX;
    }
}

pub fn find_poset_isomorphism(p: &Poset, q: &Poset) -> Option<Vec<usize>> {
    poset_isomorphisms(p, q, 1).pop()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Poset {
        Poset::product(&[&Poset::chain(2), &Poset::chain(2)])
    }

    #[test]
    fn antichain_of_two_has_four_up_sets() {
        let p = Poset::antichain(2);
        let ups = p.up_sets();
        assert_eq!(ups.len(), 4);
        assert_eq!(p.count_up_sets(), Some(4));
    }

    #[test]
    fn grid_up_sets_match_brute_force() {
        let p = grid();
        let brute = (0u32..16)
            .filter(|mask| p.is_up_set(&set_from(4, (0..4).filter(|i| mask & (1 << i) != 0))))
            .count();
        assert_eq!(brute, 6);
        assert_eq!(p.up_sets().len(), 6);
        assert_eq!(p.count_up_sets(), Some(6));
    }

    #[test]
    fn closure_and_antisymmetry() {
        let p = Poset::from_pairs(3, [(0, 1), (1, 2)]).unwrap();
        assert!(p.leq(0, 2));
        assert!(matches!(Poset::from_pairs(2, [(0, 1), (1, 0)]), Err(Error::NotAntisymmetric(0, 1))));
        assert!(matches!(QuasiOrder::from_fn(2, |i, j| i != j), Err(Error::NotReflexive(0))));
    }

    #[test]
    fn components_of_antichain_and_chain() {
        assert_eq!(Poset::antichain(3).order_components().len(), 3);
        assert_eq!(Poset::chain(2).order_components(), vec![vec![0, 1]]);
    }

    #[test]
    fn semi_constancy() {
        let a = Poset::antichain(3);
        let c = Poset::chain(2);
        let m = MonotoneMap::new(a.clone(), c.clone(), vec![0, 1, 1]).unwrap();
        assert!(m.is_semi_constant());
        assert!(!MonotoneMap::identity(&c).is_semi_constant());
        assert!(matches!(
            restricted_linear_sum(&c, &c, &MonotoneMap::identity(&c)),
            Err(Error::NotSemiConstant(_))
        ));
    }

    #[test]
    fn singleton_sum_is_a_two_chain() {
        let one = Poset::chain(1);
        let phi = MonotoneMap::identity(&one);
        let sum = restricted_linear_sum(&one, &one, &phi).unwrap();
        assert_eq!(sum, Poset::chain(2));
    }

    #[test]
    fn doubling_single_layer_is_two_copies() {
        let (d, pts) = doubling(&[grid()], &[]).unwrap();
        assert_eq!(d, Poset::disjoint_union(&[&grid(), &grid()]));
        assert_eq!(pts.len(), 8);
        assert!(matches!(doubling(&[grid()], &[MonotoneMap::identity(&grid())]), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn doubled_singleton_chain_counts() {
        for n in 0..6 {
            let layers = vec![Poset::chain(1); n + 1];
            let links: Vec<_> = (0..n).map(|_| MonotoneMap::identity(&layers[0])).collect();
            let (d, _) = doubling(&layers, &links).unwrap();
            assert_eq!(d.size(), 2 * (n + 1));
            assert_eq!(d.up_sets().len(), 3 * n + 4);
            assert_eq!(d.count_up_sets(), Some(3 * n as u128 + 4));
        }
    }

    #[test]
    fn grid_has_two_automorphisms() {
        assert_eq!(poset_isomorphisms(&grid(), &grid(), 10).len(), 2);
        assert!(find_poset_isomorphism(&grid(), &Poset::chain(4)).is_none());
    }

    #[test]
    fn hasse_of_chain() {
        assert_eq!(Poset::chain(3).hasse_edges(), vec![(0, 1), (1, 2)]);
        let dot = hasse_dot(&Poset::chain(2), "c", None);
        assert!(dot.contains("n0 -> n1"));
    }
}
