//! Finite bounded distributive lattices and finite Priestley/Birkhoff duality.
//!
//! The dual of a lattice is the set of its homomorphisms onto the
//! two-element lattice, ordered pointwise; the dual of a poset is its lattice
//! of up-sets.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::poset::{poset_isomorphisms, set_from, ElemSet, MonotoneMap, Poset};

/// A finite bounded distributive lattice given by its operation tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistLattice {
    size: usize,
    meet: Vec<usize>,
    join: Vec<usize>,
    bot: usize,
    top: usize,
}

impl DistLattice {
    /// Tables are row-major: `meet[a * size + b]`.
    pub fn new(size: usize, meet: Vec<usize>, join: Vec<usize>, bot: usize, top: usize) -> Result<Self> {
        let l = DistLattice { size, meet, join, bot, top };
        l.validate()?;
        Ok(l)
    }

    pub(crate) fn new_unchecked(size: usize, meet: Vec<usize>, join: Vec<usize>, bot: usize, top: usize) -> Self {
        DistLattice { size, meet, join, bot, top }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.size;
        if n == 0 {
            return Err(Error::NotALattice("empty universe".into()));
        }
        for table in [&self.meet, &self.join] {
            if table.len() != n * n {
                return Err(Error::LengthMismatch { expected: n * n, found: table.len() });
            }
            if let Some(&v) = table.iter().find(|&&v| v >= n) {
                return Err(Error::IndexOutOfRange { index: v, size: n });
            }
        }
        for x in [self.bot, self.top] {
            if x >= n {
                return Err(Error::IndexOutOfRange { index: x, size: n });
            }
        }
        for a in 0..n {
            if self.meet(a, a) != a || self.join(a, a) != a {
                return Err(Error::NotALattice(format!("operations not idempotent at {a}")));
            }
            if self.meet(a, self.top) != a || self.join(a, self.bot) != a {
                return Err(Error::NotALattice(format!("bounds are not units at {a}")));
            }
            for b in 0..n {
                if self.meet(a, b) != self.meet(b, a) || self.join(a, b) != self.join(b, a) {
                    return Err(Error::NotALattice(format!("operations not commutative at ({a},{b})")));
                }
                if self.meet(a, self.join(a, b)) != a || self.join(a, self.meet(a, b)) != a {
                    return Err(Error::NotALattice(format!("absorption fails at ({a},{b})")));
                }
                for c in 0..n {
                    if self.meet(a, self.meet(b, c)) != self.meet(self.meet(a, b), c)
                        || self.join(a, self.join(b, c)) != self.join(self.join(a, b), c)
                    {
                        return Err(Error::NotALattice(format!("operations not associative at ({a},{b},{c})")));
                    }
                    if self.meet(a, self.join(b, c)) != self.join(self.meet(a, b), self.meet(a, c)) {
                        return Err(Error::NotDistributive(a, b, c));
                    }
                }
            }
        }
        Ok(())
    }

    /// Meets and joins read off a partial order by bound search.
    pub fn from_order(p: &Poset) -> Result<Self> {
        let (meet, join) = bound_tables(p)?;
        let n = p.size();
        let bot = (0..n)
            .find(|&x| (0..n).all(|y| p.leq(x, y)))
            .ok_or_else(|| Error::NotALattice("no least element".into()))?;
        let top = (0..n)
            .find(|&x| (0..n).all(|y| p.leq(y, x)))
            .ok_or_else(|| Error::NotALattice("no greatest element".into()))?;
        DistLattice::new(n, meet, join, bot, top)
    }

    pub fn two() -> Self {
        DistLattice::chain(2)
    }

    pub fn chain(k: usize) -> Self {
        assert!(k >= 1);
        let meet = (0..k * k).map(|i| (i / k).min(i % k)).collect();
        let join = (0..k * k).map(|i| (i / k).max(i % k)).collect();
        DistLattice::new_unchecked(k, meet, join, 0, k - 1)
    }

    /// The Boolean lattice of subsets of a k-set; element bits are members.
    pub fn boolean(k: usize) -> Self {
        let n = 1usize << k;
        let meet = (0..n * n).map(|i| (i / n) & (i % n)).collect();
        let join = (0..n * n).map(|i| (i / n) | (i % n)).collect();
        DistLattice::new_unchecked(n, meet, join, 0, n - 1)
    }

    /// Direct product, first factor most significant.
    pub fn product(factors: &[&DistLattice]) -> Self {
        let sizes: Vec<usize> = factors.iter().map(|l| l.size).collect();
        let total: usize = sizes.iter().product();
        let decode = |mut idx: usize| {
            let mut d = vec![0; sizes.len()];
            for k in (0..sizes.len()).rev() {
                d[k] = idx % sizes[k];
                idx /= sizes[k];
            }
            d
        };
        let encode = |d: &[usize]| d.iter().zip(&sizes).fold(0, |acc, (x, s)| acc * s + x);
        let coords: Vec<Vec<usize>> = (0..total).map(decode).collect();
        let mut meet = vec![0; total * total];
        let mut join = vec![0; total * total];
        for a in 0..total {
            for b in 0..total {
                let m: Vec<usize> = factors.iter().enumerate().map(|(k, l)| l.meet(coords[a][k], coords[b][k])).collect();
                let j: Vec<usize> = factors.iter().enumerate().map(|(k, l)| l.join(coords[a][k], coords[b][k])).collect();
                meet[a * total + b] = encode(&m);
                join[a * total + b] = encode(&j);
            }
        }
        let bot = encode(&factors.iter().map(|l| l.bot).collect::<Vec<_>>());
        let top = encode(&factors.iter().map(|l| l.top).collect::<Vec<_>>());
        DistLattice::new_unchecked(total, meet, join, bot, top)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.size + b]
    }

    #[inline]
    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.size + b]
    }

    pub fn bot(&self) -> usize {
        self.bot
    }

    pub fn top(&self) -> usize {
        self.top
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.meet(a, b) == a
    }

    pub fn meet_table(&self) -> &[usize] {
        &self.meet
    }

    pub fn join_table(&self) -> &[usize] {
        &self.join
    }

    pub fn order(&self) -> Poset {
        Poset::from_fn(self.size, |a, b| self.leq(a, b)).expect("lattice order")
    }

    /// The complement of `a`, if it has one.
    pub fn complement_of(&self, a: usize) -> Option<usize> {
        (0..self.size).find(|&b| self.meet(a, b) == self.bot && self.join(a, b) == self.top)
    }

    /// Elements that are not the bottom and not a join of two strictly
    /// smaller elements, in increasing index order.
    pub fn join_irreducibles(&self) -> Vec<usize> {
        let order = self.order();
        (0..self.size)
            .filter(|&x| {
                if x == self.bot {
                    return false;
                }
                let below: Vec<usize> = (0..self.size).filter(|&y| order.lt(y, x)).collect();
                let top_below = below.iter().fold(self.bot, |acc, &y| self.join(acc, y));
                top_below != x
            })
            .collect()
    }
}

pub(crate) fn bound_tables(p: &Poset) -> Result<(Vec<usize>, Vec<usize>)> {
    let n = p.size();
    let mut meet = vec![0; n * n];
    let mut join = vec![0; n * n];
    for a in 0..n {
        for b in 0..n {
            let lower: Vec<usize> = (0..n).filter(|&x| p.leq(x, a) && p.leq(x, b)).collect();
            let upper: Vec<usize> = (0..n).filter(|&x| p.leq(a, x) && p.leq(b, x)).collect();
            meet[a * n + b] = *lower
                .iter()
                .find(|&&x| lower.iter().all(|&y| p.leq(y, x)))
                .ok_or_else(|| Error::NotALattice(format!("no meet for ({a},{b})")))?;
            join[a * n + b] = *upper
                .iter()
                .find(|&&x| upper.iter().all(|&y| p.leq(x, y)))
                .ok_or_else(|| Error::NotALattice(format!("no join for ({a},{b})")))?;
        }
    }
    Ok((meet, join))
}

/// A bounded lattice homomorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeHom {
    dom: DistLattice,
    cod: DistLattice,
    table: Vec<usize>,
}

impl LatticeHom {
    pub fn new(dom: DistLattice, cod: DistLattice, table: Vec<usize>) -> Result<Self> {
        if table.len() != dom.size() {
            return Err(Error::LengthMismatch { expected: dom.size(), found: table.len() });
        }
        if let Some(&v) = table.iter().find(|&&v| v >= cod.size()) {
            return Err(Error::IndexOutOfRange { index: v, size: cod.size() });
        }
        if !is_lattice_hom(&dom, &cod, &table) {
            return Err(Error::NotAHomomorphism("lattice map fails to preserve bounds, meets or joins".into()));
        }
        Ok(LatticeHom { dom, cod, table })
    }

    pub fn identity(l: &DistLattice) -> Self {
        LatticeHom { dom: l.clone(), cod: l.clone(), table: (0..l.size()).collect() }
    }

    pub fn dom(&self) -> &DistLattice {
        &self.dom
    }

    pub fn cod(&self) -> &DistLattice {
        &self.cod
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    #[inline]
    pub fn apply(&self, a: usize) -> usize {
        self.table[a]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &LatticeHom) -> Result<LatticeHom> {
        if self.cod != other.dom {
            return Err(Error::LengthMismatch { expected: self.cod.size(), found: other.dom.size() });
        }
        let table = self.table.iter().map(|&a| other.table[a]).collect();
        Ok(LatticeHom { dom: self.dom.clone(), cod: other.cod.clone(), table })
    }

    /// Image elements in increasing order, without repeats.
    pub fn image(&self) -> Vec<usize> {
        let mut img = self.table.clone();
        img.sort_unstable();
        img.dedup();
        img
    }
}

pub fn is_lattice_hom(dom: &DistLattice, cod: &DistLattice, table: &[usize]) -> bool {
    if table[dom.bot()] != cod.bot() || table[dom.top()] != cod.top() {
        return false;
    }
    for a in 0..dom.size() {
        for b in 0..dom.size() {
            if table[dom.meet(a, b)] != cod.meet(table[a], table[b])
                || table[dom.join(a, b)] != cod.join(table[a], table[b])
            {
                return false;
            }
        }
    }
    true
}

/// The dual poset of a lattice. Each point is a homomorphism onto the
/// two-element lattice, stored as the set of elements it sends to 1.
#[derive(Clone, Debug)]
pub struct DualSpace {
    pub poset: Poset,
    pub points: Vec<ElemSet>,
    index: HashMap<ElemSet, usize>,
}

impl DualSpace {
    pub fn index_of(&self, point: &ElemSet) -> Option<usize> {
        self.index.get(point).copied()
    }

    /// Value of point `x` at lattice element `a`.
    pub fn eval(&self, x: usize, a: usize) -> bool {
        self.points[x].contains(a)
    }
}

/// Homomorphisms `l → 2`, found by backtracking along a linear extension.
/// Setting an element to 1 forces everything above it to 1, setting it to 0
/// forces everything below it to 0, and any meet or join whose three
/// entries are decided must be respected.
pub fn homs_to_two(l: &DistLattice) -> Vec<ElemSet> {
    let n = l.size();
    let order = l.order();
    let ext = order.linear_extension();
    let mut values: Vec<Option<bool>> = vec![None; n];
    let mut out = Vec::new();
    if l.bot() == l.top() {
        return out;
    }
    values[l.bot()] = Some(false);
    values[l.top()] = Some(true);
    two_rec(l, &order, &ext, 0, &mut values, &mut out);
    out.sort_by_key(|s| s.ones().collect::<Vec<_>>());
    out
}

fn two_rec(
    l: &DistLattice,
    order: &Poset,
    ext: &[usize],
    depth: usize,
    values: &mut Vec<Option<bool>>,
    out: &mut Vec<ElemSet>,
) {
    let n = l.size();
    let mut d = depth;
    while d < ext.len() && values[ext[d]].is_some() {
        d += 1;
    }
    if d == ext.len() {
        out.push(set_from(n, (0..n).filter(|&a| values[a] == Some(true))));
        return;
    }
    let x = ext[d];
    for choice in [false, true] {
        let saved = values.clone();
        let mut ok = true;
        for y in 0..n {
            let forced = if choice { order.leq(x, y) } else { order.leq(y, x) };
            if forced {
                match values[y] {
                    Some(v) if v != choice => {
                        ok = false;
                        break;
                    }
                    _ => values[y] = Some(choice),
                }
            }
        }
        if ok && consistent_with_two(l, values) {
            two_rec(l, order, ext, d + 1, values, out);
        }
        *values = saved;
    }
}

fn consistent_with_two(l: &DistLattice, values: &[Option<bool>]) -> bool {
    let n = l.size();
    for a in 0..n {
        let Some(va) = values[a] else { continue };
        for b in a + 1..n {
            let Some(vb) = values[b] else { continue };
            if let Some(m) = values[l.meet(a, b)] {
                if m != (va && vb) {
                    return false;
                }
            }
            if let Some(j) = values[l.join(a, b)] {
                if j != (va || vb) {
                    return false;
                }
            }
        }
    }
    true
}

/// The dual poset of `l`: homomorphisms to 2 under the pointwise order.
pub fn dual_space(l: &DistLattice) -> DualSpace {
    let points = homs_to_two(l);
    let poset = Poset::from_fn(points.len(), |x, y| points[x].is_subset(&points[y])).expect("pointwise order");
    let index = points.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    DualSpace { poset, points, index }
}

/// The lattice of up-sets of a poset under intersection and union.
#[derive(Clone, Debug)]
pub struct UpSetLattice {
    pub lattice: DistLattice,
    pub sets: Vec<ElemSet>,
    index: HashMap<ElemSet, usize>,
}

impl UpSetLattice {
    pub fn index_of(&self, set: &ElemSet) -> Option<usize> {
        self.index.get(set).copied()
    }
}

pub fn up_set_lattice(p: &Poset) -> UpSetLattice {
    let sets = p.up_sets();
    let index: HashMap<ElemSet, usize> = sets.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    let n = sets.len();
    let mut meet = vec![0; n * n];
    let mut join = vec![0; n * n];
    for a in 0..n {
        for b in a..n {
            let mut m = sets[a].clone();
            m.intersect_with(&sets[b]);
            let mut j = sets[a].clone();
            j.union_with(&sets[b]);
            let (mi, ji) = (index[&m], index[&j]);
            meet[a * n + b] = mi;
            meet[b * n + a] = mi;
            join[a * n + b] = ji;
            join[b * n + a] = ji;
        }
    }
    let bot = index[&ElemSet::with_capacity(p.size())];
    let mut full = ElemSet::with_capacity(p.size());
    full.insert_range(..);
    let top = index[&full];
    UpSetLattice { lattice: DistLattice::new_unchecked(n, meet, join, bot, top), sets, index }
}

/// The canonical map `a ↦ {x ∈ dual : x(a) = 1}` from a lattice to the
/// up-set lattice of its dual, checked to be an isomorphism.
#[derive(Clone, Debug)]
pub struct CanonicalIso {
    pub dual: DualSpace,
    pub up_sets: UpSetLattice,
    pub table: Vec<usize>,
}

pub fn canonical_iso(l: &DistLattice) -> Result<CanonicalIso> {
    let dual = dual_space(l);
    let up_sets = up_set_lattice(&dual.poset);
    let mut table = Vec::with_capacity(l.size());
    for a in 0..l.size() {
        let set = set_from(dual.points.len(), (0..dual.points.len()).filter(|&x| dual.eval(x, a)));
        let idx = up_sets
            .index_of(&set)
            .ok_or_else(|| Error::IsoFailure(format!("element {a} maps to a non-up-set")))?;
        table.push(idx);
    }
    let mut seen = vec![false; up_sets.sets.len()];
    for &t in &table {
        if std::mem::replace(&mut seen[t], true) {
            return Err(Error::IsoFailure("canonical map is not injective".into()));
        }
    }
    if table.len() != up_sets.sets.len() {
        return Err(Error::IsoFailure("canonical map is not surjective".into()));
    }
    if !is_lattice_hom(l, &up_sets.lattice, &table) {
        return Err(Error::IsoFailure("canonical map is not a homomorphism".into()));
    }
    Ok(CanonicalIso { dual, up_sets, table })
}

/// The dual of a lattice homomorphism `f: L → M`: the map from the dual of
/// M to the dual of L given by `y ↦ y ∘ f`, with both sides of the
/// semi-constant/complemented equivalence evaluated independently.
#[derive(Clone, Debug)]
pub struct HomDual {
    pub cod_dual: DualSpace,
    pub dom_dual: DualSpace,
    pub map: MonotoneMap,
    pub semi_constant: bool,
    pub image_complemented: bool,
}

impl HomDual {
    pub fn verdicts_agree(&self) -> bool {
        self.semi_constant == self.image_complemented
    }
}

pub fn hom_dual(f: &LatticeHom) -> Result<HomDual> {
    let dom_dual = dual_space(f.dom());
    let cod_dual = dual_space(f.cod());
    let mut table = Vec::with_capacity(cod_dual.points.len());
    for y in &cod_dual.points {
        let pulled = set_from(f.dom().size(), (0..f.dom().size()).filter(|&a| y.contains(f.apply(a))));
        let idx = dom_dual
            .index_of(&pulled)
            .ok_or_else(|| Error::NotAHomomorphism("composite with a dual point is not a homomorphism".into()))?;
        table.push(idx);
    }
    let map = MonotoneMap::new(cod_dual.poset.clone(), dom_dual.poset.clone(), table)?;
    let semi_constant = map.is_semi_constant();
    let image_complemented = f.image().iter().all(|&c| f.cod().complement_of(c).is_some());
    Ok(HomDual { cod_dual, dom_dual, map, semi_constant, image_complemented })
}

/// The homomorphism `K(P) → K(Q)` taking preimages along `psi: Q → P`.
pub fn preimage_hom(psi: &MonotoneMap, kp: &UpSetLattice, kq: &UpSetLattice) -> Result<LatticeHom> {
    let mut table = Vec::with_capacity(kp.sets.len());
    for u in &kp.sets {
        let pre = psi.preimage(u);
        let idx = kq
            .index_of(&pre)
            .ok_or_else(|| Error::NotAHomomorphism("preimage of an up-set is not an up-set".into()))?;
        table.push(idx);
    }
    LatticeHom::new(kp.lattice.clone(), kq.lattice.clone(), table)
}

/// Every bounded lattice homomorphism `a → b` by exhaustive backtracking
/// along a linear extension of `a`. Meant for small lattices.
pub fn lattice_homs(a: &DistLattice, b: &DistLattice) -> Vec<Vec<usize>> {
    let order = a.order();
    let ext = order.linear_extension();
    let mut table = vec![usize::MAX; a.size()];
    let mut out = Vec::new();
    lh_rec(a, b, &order, &ext, 0, &mut table, &mut out);
    out.sort();
    out
}

fn lh_rec(
    a: &DistLattice,
    b: &DistLattice,
    order: &Poset,
    ext: &[usize],
    depth: usize,
    table: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if depth == ext.len() {
        if is_lattice_hom(a, b, table) {
            out.push(table.clone());
        }
        return;
    }
    let x = ext[depth];
    let candidates: Vec<usize> = if x == a.bot() {
        vec![b.bot()]
    } else if x == a.top() {
        vec![b.top()]
    } else {
        (0..b.size()).collect()
    };
    for v in candidates {
        table[x] = v;
        let ok = ext[..depth].iter().all(|&y| {
            let ty = table[y];
            (!order.leq(y, x) || b.leq(ty, v))
                && (table[a.meet(x, y)] == usize::MAX || table[a.meet(x, y)] == b.meet(v, ty))
                && (table[a.join(x, y)] == usize::MAX || table[a.join(x, y)] == b.join(v, ty))
        });
        if ok {
            lh_rec(a, b, order, ext, depth + 1, table, out);
        }
        table[x] = usize::MAX;
    }
}

/// A lattice isomorphism `a → b`, built from an order isomorphism between
/// the posets of join-irreducibles and then checked.
pub fn find_lattice_isomorphism(a: &DistLattice, b: &DistLattice) -> Option<Vec<usize>> {
    if a.size() != b.size() {
        return None;
    }
    let ja = a.join_irreducibles();
    let jb = b.join_irreducibles();
    if ja.len() != jb.len() {
        return None;
    }
    let pa = a.order().restrict(&ja);
    let pb = b.order().restrict(&jb);
    for sigma in poset_isomorphisms(&pa, &pb, 64) {
        let table: Vec<usize> = (0..a.size())
            .map(|x| {
                ja.iter()
                    .enumerate()
                    .filter(|&(_, &j)| a.leq(j, x))
                    .fold(b.bot(), |acc, (k, _)| b.join(acc, jb[sigma[k]]))
            })
            .collect();
        let mut sorted = table.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() == a.size() && is_lattice_hom(a, b, &table) {
            return Some(table);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l0() -> DistLattice {
        // 1 ⊕ 2² ⊕ 1: bottom, the four-element square, top.
        let p = Poset::from_pairs(6, [(0, 1), (1, 2), (1, 3), (2, 4), (3, 4), (4, 5)]).unwrap();
        DistLattice::from_order(&p).unwrap()
    }

    #[test]
    fn two_has_one_point_dual() {
        assert_eq!(dual_space(&DistLattice::two()).points.len(), 1);
    }

    #[test]
    fn stacked_square_dual_has_four_points() {
        let d = dual_space(&l0());
        assert_eq!(d.points.len(), 4);
        // A diamond, the knowledge order of the four-element bilattice.
        assert_eq!(d.poset.order_components().len(), 1);
        assert_eq!(d.poset.hasse_edges().len(), 4);
        let iso = canonical_iso(&l0()).unwrap();
        assert_eq!(iso.up_sets.sets.len(), 6);
    }

    #[test]
    fn pentagon_is_rejected() {
        let p = Poset::from_pairs(5, [(0, 1), (1, 2), (0, 3), (2, 4), (3, 4)]).unwrap();
        assert!(matches!(DistLattice::from_order(&p), Err(Error::NotDistributive(..))));
    }

    #[test]
    fn complements() {
        let c3 = DistLattice::chain(3);
        assert_eq!(c3.complement_of(0), Some(2));
        assert_eq!(c3.complement_of(1), None);
        let b = DistLattice::boolean(3);
        for a in 0..8 {
            assert_eq!(b.complement_of(a), Some(7 ^ a));
        }
    }

    #[test]
    fn chain_into_square_on_bounds() {
        let two = DistLattice::two();
        let sq = DistLattice::boolean(2);
        let f = LatticeHom::new(two, sq, vec![0, 3]).unwrap();
        let d = hom_dual(&f).unwrap();
        assert!(d.semi_constant && d.image_complemented);
    }

    #[test]
    fn brute_homs_match_dual_count() {
        let sq = DistLattice::boolean(2);
        // Homs 2² → 2² correspond to self-maps of a two-point antichain.
        assert_eq!(lattice_homs(&sq, &sq).len(), 4);
        assert_eq!(lattice_homs(&DistLattice::chain(3), &DistLattice::two()).len(), 2);
    }

    #[test]
    fn isomorphism_of_products() {
        let a = DistLattice::product(&[&DistLattice::two(), &DistLattice::chain(3)]);
        let b = DistLattice::product(&[&DistLattice::chain(3), &DistLattice::two()]);
        assert!(find_lattice_isomorphism(&a, &b).is_some());
        assert!(find_lattice_isomorphism(&a, &DistLattice::chain(6)).is_none());
    }
}
