//! Default sequences L_0 → L_1 → … → L_n of distributive lattices, their
//! translation to and from multisorted dual objects, and the product
//! bilattice built on pairs of coordinates.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::algebra::{is_homomorphism, BinOp, FiniteAlgebra, BIN_OPS};
use crate::duality::{alter_ego, dualize, evaluate, MultisortedSpace, SortedMap};
use crate::error::{Error, Result};
use crate::kn::{build_kn, Kn, KnElem};
use crate::lattice::{
    canonical_iso, dual_space, hom_dual, lattice_homs, preimage_hom, up_set_lattice, DistLattice, DualSpace,
    LatticeHom, UpSetLattice,
};
use crate::poset::{set_from, ElemSet, MonotoneMap};

/// Why a candidate sequence is not a default sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SequenceDefect {
    NoLattices,
    /// `homs.len()` does not match `lattices.len() - 1`.
    WrongLength { lattices: usize, homs: usize },
    /// h_j is not a bounded lattice homomorphism L_{j-1} → L_j.
    NotAHom { j: usize },
    /// c = h_j(x) has no complement in L_j.
    NotComplemented { j: usize, c: usize },
}

impl std::fmt::Display for SequenceDefect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SequenceDefect::NoLattices => write!(f, "no lattices"),
            SequenceDefect::WrongLength { lattices, homs } => {
                write!(f, "{lattices} lattices need {} maps, found {homs}", lattices.saturating_sub(1))
            }
            SequenceDefect::NotAHom { j } => write!(f, "h_{j} is not a lattice homomorphism"),
            SequenceDefect::NotComplemented { j, c } => write!(f, "element {c} of the image of h_{j} has no complement"),
        }
    }
}

/// Checks the maps and the complement condition, reporting the first
/// offending map or element.
pub fn validate_sequence(lattices: &[DistLattice], homs: &[Vec<usize>]) -> std::result::Result<(), SequenceDefect> {
    if lattices.is_empty() {
        return Err(SequenceDefect::NoLattices);
    }
    if homs.len() + 1 != lattices.len() {
        return Err(SequenceDefect::WrongLength { lattices: lattices.len(), homs: homs.len() });
    }
    for (k, h) in homs.iter().enumerate() {
        let j = k + 1;
        if h.len() != lattices[k].size()
            || h.iter().any(|&v| v >= lattices[j].size())
            || !crate::lattice::is_lattice_hom(&lattices[k], &lattices[j], h)
        {
            return Err(SequenceDefect::NotAHom { j });
        }
        let mut image: Vec<usize> = h.clone();
        image.sort_unstable();
        image.dedup();
        if let Some(&c) = image.iter().find(|&&c| lattices[j].complement_of(c).is_none()) {
            return Err(SequenceDefect::NotComplemented { j, c });
        }
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct DefaultSequence {
    lattices: Vec<DistLattice>,
    homs: Vec<LatticeHom>,
    /// `complements[j - 1][c]` is the complement of c in L_j when c lies in
    /// the image of h_j.
    complements: Vec<Vec<Option<usize>>>,
}

impl DefaultSequence {
    pub fn new(lattices: Vec<DistLattice>, homs: Vec<Vec<usize>>) -> Result<Self> {
        validate_sequence(&lattices, &homs).map_err(|d| Error::InvalidSequence(d.to_string()))?;
        let mut complements = Vec::with_capacity(homs.len());
        let mut hom_objs = Vec::with_capacity(homs.len());
        for (k, h) in homs.into_iter().enumerate() {
            let lj = &lattices[k + 1];
            let mut comp = vec![None; lj.size()];
            for &c in &h {
                comp[c] = lj.complement_of(c);
            }
            for (c, w) in comp.iter().enumerate() {
                if let Some(w) = *w {
                    assert!(lj.meet(c, w) == lj.bot() && lj.join(c, w) == lj.top());
                }
            }
            complements.push(comp);
            hom_objs.push(LatticeHom::new(lattices[k].clone(), lj.clone(), h)?);
        }
        Ok(DefaultSequence { lattices, homs: hom_objs, complements })
    }

    /// 2 → 2 → … → 2 with identity maps, n maps in all.
    pub fn all_two(n: usize) -> Self {
        DefaultSequence::new(vec![DistLattice::two(); n + 1], vec![vec![0, 1]; n]).expect("valid sequence")
    }

    /// The index of the last lattice.
    pub fn n(&self) -> usize {
        self.lattices.len() - 1
    }

    pub fn lattices(&self) -> &[DistLattice] {
        &self.lattices
    }

    pub fn lattice(&self, i: usize) -> &DistLattice {
        &self.lattices[i]
    }

    /// h_j: L_{j-1} → L_j, for j ≥ 1.
    pub fn hom(&self, j: usize) -> &LatticeHom {
        &self.homs[j - 1]
    }

    pub fn hom_tables(&self) -> Vec<Vec<usize>> {
        self.homs.iter().map(|h| h.table().to_vec()).collect()
    }

    /// The stored complement of h_j(x) in L_j.
    pub fn complement_of_image(&self, j: usize, x: usize) -> usize {
        self.complements[j - 1][self.homs[j - 1].apply(x)].expect("validated on construction")
    }
}

/// The dual object of a sequence, keeping the dual spaces of each lattice.
#[derive(Clone, Debug)]
pub struct SequenceDual {
    pub space: MultisortedSpace,
    pub duals: Vec<DualSpace>,
}

/// Sorts are the duals of the lattices, links the duals of the maps.
pub fn functor_hn(s: &DefaultSequence) -> Result<SequenceDual> {
    let duals: Vec<DualSpace> = s.lattices.iter().map(dual_space).collect();
    let mut links = Vec::with_capacity(s.homs.len());
    for h in &s.homs {
        let d = hom_dual(h)?;
        if !d.semi_constant {
            return Err(Error::InvalidSequence("dual of a link is not semi-constant".into()));
        }
        links.push(d.map.table().to_vec());
    }
    let space = MultisortedSpace::new(duals.iter().map(|d| d.poset.clone()).collect(), links)?;
    space.check_dual_object().map_err(|e| Error::InvalidSequence(e.to_string()))?;
    Ok(SequenceDual { space, duals })
}

/// The sequence of a dual object, keeping the up-set lattices.
#[derive(Clone, Debug)]
pub struct SpaceSequence {
    pub sequence: DefaultSequence,
    pub up_sets: Vec<UpSetLattice>,
}

/// Lattices are the up-set lattices of the sorts, maps are preimages along
/// the links.
pub fn functor_kn(x: &MultisortedSpace) -> Result<SpaceSequence> {
    x.check_dual_object()?;
    let up_sets: Vec<UpSetLattice> = x.sorts.iter().map(up_set_lattice).collect();
    let mut homs = Vec::with_capacity(x.links.len());
    for (k, link) in x.links.iter().enumerate() {
        let psi = MonotoneMap::new(x.sorts[k + 1].clone(), x.sorts[k].clone(), link.clone())?;
        homs.push(preimage_hom(&psi, &up_sets[k], &up_sets[k + 1])?.table().to_vec());
    }
    let sequence = DefaultSequence::new(up_sets.iter().map(|u| u.lattice.clone()).collect(), homs)?;
    Ok(SpaceSequence { sequence, up_sets })
}

/// Level-wise lattice homomorphisms between two sequences.
#[derive(Clone, Debug)]
pub struct DefaultMorphism {
    maps: Vec<LatticeHom>,
}

impl DefaultMorphism {
    /// Checks that each square f_j ∘ h_j = h'_j ∘ f_{j-1} commutes.
    pub fn new(src: &DefaultSequence, dst: &DefaultSequence, maps: Vec<Vec<usize>>) -> Result<Self> {
        if maps.len() != src.lattices.len() || src.lattices.len() != dst.lattices.len() {
            return Err(Error::InvalidSequence("sequences of different lengths".into()));
        }
        let maps: Vec<LatticeHom> = maps
            .into_iter()
            .enumerate()
            .map(|(i, t)| LatticeHom::new(src.lattices[i].clone(), dst.lattices[i].clone(), t))
            .collect::<Result<_>>()?;
        for j in 1..maps.len() {
            for x in 0..src.lattices[j - 1].size() {
                if maps[j].apply(src.hom(j).apply(x)) != dst.hom(j).apply(maps[j - 1].apply(x)) {
                    return Err(Error::NotAHomomorphism(format!("square {j} does not commute at {x}")));
                }
            }
        }
        Ok(DefaultMorphism { maps })
    }

    pub fn maps(&self) -> &[LatticeHom] {
        &self.maps
    }

    pub fn then(&self, other: &DefaultMorphism) -> Result<DefaultMorphism> {
        let maps = self.maps.iter().zip(&other.maps).map(|(f, g)| f.then(g)).collect::<Result<_>>()?;
        Ok(DefaultMorphism { maps })
    }

    pub fn is_isomorphism(&self) -> bool {
        self.maps.iter().all(|f| {
            let mut img = f.image();
            img.dedup();
            img.len() == f.dom().size() && f.dom().size() == f.cod().size()
        })
    }
}

/// An isomorphism of sequences, if one exists. Tries every combination of
/// level-wise lattice isomorphisms, pruning on the first square that fails.
pub fn find_sequence_isomorphism(s: &DefaultSequence, t: &DefaultSequence) -> Option<DefaultMorphism> {
    if s.lattices.len() != t.lattices.len() {
        return None;
    }
    let candidates: Vec<Vec<Vec<usize>>> = s
        .lattices
        .iter()
        .zip(&t.lattices)
        .map(|(a, b)| {
            if a.size() != b.size() {
                return Vec::new();
            }
            lattice_homs(a, b)
                .into_iter()
                .filter(|h| {
                    let mut v = h.clone();
                    v.sort_unstable();
                    v.dedup();
                    v.len() == h.len()
                })
                .collect()
        })
        .collect();
    let mut chosen: Vec<usize> = Vec::new();
    if iso_rec(s, t, &candidates, &mut chosen) {
        let maps = chosen.iter().enumerate().map(|(i, &c)| candidates[i][c].clone()).collect();
        DefaultMorphism::new(s, t, maps).ok()
    } else {
        None
    }
}

fn iso_rec(s: &DefaultSequence, t: &DefaultSequence, cands: &[Vec<Vec<usize>>], chosen: &mut Vec<usize>) -> bool {
    let j = chosen.len();
    if j == cands.len() {
        return true;
    }
    for c in 0..cands[j].len() {
        let f = &cands[j][c];
        if j > 0 {
            let prev = &cands[j - 1][chosen[j - 1]];
            let ok = (0..s.lattices[j - 1].size()).all(|x| f[s.hom(j).apply(x)] == t.hom(j).apply(prev[x]));
            if !ok {
                continue;
            }
        }
        chosen.push(c);
        if iso_rec(s, t, cands, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// The morphism s → K_n(H_n(s)) made of the canonical lattice isomorphisms,
/// with every square checked.
pub fn unit_morphism(s: &DefaultSequence) -> Result<(SpaceSequence, DefaultMorphism)> {
    let hs = functor_hn(s)?;
    let ks = functor_kn(&hs.space)?;
    let mut maps = Vec::with_capacity(s.lattices.len());
    for (i, l) in s.lattices.iter().enumerate() {
        let c = canonical_iso(l)?;
        // both sides enumerate the dual in the same order, so up-sets match by value
        let table = c.table.iter().map(|&u| ks.up_sets[i].index_of(&c.up_sets.sets[u]).expect("same dual")).collect();
        maps.push(table);
    }
    let m = DefaultMorphism::new(s, &ks.sequence, maps)?;
    Ok((ks, m))
}

/// A coordinate pair (a_{i,t}, a_{i,f}) per level.
pub type Coords = Vec<(usize, usize)>;

/// The number of admissible tuples, by dynamic programming over the value
/// of h_i(a_{i-1,t} ∨ a_{i-1,f}).
pub fn count_universe(s: &DefaultSequence) -> u128 {
    let l0 = s.lattice(0);
    let mut by_join: Vec<u128> = vec![0; l0.size()];
    for t in 0..l0.size() {
        for f in 0..l0.size() {
            by_join[l0.join(t, f)] += 1;
        }
    }
    for i in 1..=s.n() {
        let li = s.lattice(i);
        let mut next = vec![0u128; li.size()];
        let mut floor_count = vec![0u128; li.size()];
        for (x, &cnt) in by_join.iter().enumerate() {
            if cnt > 0 {
                floor_count[s.hom(i).apply(x)] += cnt;
            }
        }
        for (floor, &cnt) in floor_count.iter().enumerate() {
            if cnt == 0 {
                continue;
            }
            for t in 0..li.size() {
                if !li.leq(floor, t) {
                    continue;
                }
                for f in 0..li.size() {
                    if li.leq(floor, f) {
                        next[li.join(t, f)] += cnt;
                    }
                }
            }
        }
        by_join = next;
    }
    by_join.iter().sum()
}

/// The product bilattice of a default sequence.
#[derive(Clone, Debug)]
pub struct ProductBilattice {
    pub sequence: DefaultSequence,
    pub universe: Vec<Coords>,
    pub algebra: FiniteAlgebra,
    index: HashMap<Coords, usize>,
}

impl ProductBilattice {
    pub fn index_of(&self, a: &Coords) -> Option<usize> {
        self.index.get(a).copied()
    }

    pub fn size(&self) -> usize {
        self.universe.len()
    }

    /// Coordinates written as bits per level (t then f), for two-element lattices.
    pub fn bit_label(&self, a: usize) -> String {
        self.universe[a]
            .iter()
            .enumerate()
            .map(|(i, &(t, f))| {
                let top = self.sequence.lattice(i).top();
                format!("{}{}", (t == top) as u8, (f == top) as u8)
            })
            .collect()
    }
}

pub fn in_universe(s: &DefaultSequence, a: &Coords) -> bool {
    if a.len() != s.lattices.len() {
        return false;
    }
    if a.iter().enumerate().any(|(i, &(t, f))| t >= s.lattice(i).size() || f >= s.lattice(i).size()) {
        return false;
    }
    (1..=s.n()).all(|i| {
        let (pt, pf) = a[i - 1];
        let floor = s.hom(i).apply(s.lattice(i - 1).join(pt, pf));
        let li = s.lattice(i);
        li.leq(floor, a[i].0) && li.leq(floor, a[i].1)
    })
}

/// Apply one of the seven operations by the coordinate formulas. Unary and
/// nullary operations ignore `b`.
pub fn coordinate_op(s: &DefaultSequence, op: BinOp, a: &Coords, b: &Coords) -> Coords {
    let mut out: Coords = Vec::with_capacity(a.len());
    for i in 0..a.len() {
        let l = s.lattice(i);
        let (at, af) = a[i];
        let (bt, bf) = b[i];
        let pair = match op {
            BinOp::KMeet => (l.meet(at, bt), l.meet(af, bf)),
            BinOp::KJoin => (l.join(at, bt), l.join(af, bf)),
            BinOp::TMeet if i == 0 => (l.meet(at, bt), l.join(af, bf)),
            BinOp::TJoin if i == 0 => (l.join(at, bt), l.meet(af, bf)),
            BinOp::TMeet => {
                let (pt, pf) = out[i - 1];
                let floor = s.hom(i).apply(s.lattice(i - 1).join(pt, pf));
                let ca = s.complement_of_image(i, a[i - 1].0);
                let cb = s.complement_of_image(i, b[i - 1].0);
                let t = l.join(l.meet(at, bt), floor);
                let f = l.join(l.join(l.meet(af, ca), l.meet(bf, cb)), floor);
                (t, f)
            }
            BinOp::TJoin => {
                let (pt, pf) = out[i - 1];
                let floor = s.hom(i).apply(s.lattice(i - 1).join(pt, pf));
                let ca = s.complement_of_image(i, a[i - 1].1);
                let cb = s.complement_of_image(i, b[i - 1].1);
                let t = l.join(l.join(l.meet(at, ca), l.meet(bt, cb)), floor);
                let f = l.join(l.meet(af, bf), floor);
                (t, f)
            }
        };
        out.push(pair);
    }
    out
}

pub fn coordinate_neg(a: &Coords) -> Coords {
    a.iter().map(|&(t, f)| (f, t)).collect()
}

/// Enumerates the admissible tuples level by level and builds the operation
/// tables from the coordinate formulas, checking closure.
pub fn build_product(s: &DefaultSequence, limit: usize) -> Result<ProductBilattice> {
    let size = count_universe(s);
    if size > limit as u128 {
        return Err(Error::SizeOverflow { size, limit: limit as u128 });
    }
    let l0 = s.lattice(0);
    let mut partial: Vec<Coords> = Vec::new();
    for t in 0..l0.size() {
        for f in 0..l0.size() {
            partial.push(vec![(t, f)]);
        }
    }
    for i in 1..=s.n() {
        let li = s.lattice(i);
        let mut next = Vec::new();
        for p in &partial {
            let (pt, pf) = p[i - 1];
            let floor = s.hom(i).apply(s.lattice(i - 1).join(pt, pf));
            for t in (0..li.size()).filter(|&t| li.leq(floor, t)) {
                for f in (0..li.size()).filter(|&f| li.leq(floor, f)) {
                    let mut q = p.clone();
                    q.push((t, f));
                    next.push(q);
                }
            }
        }
        partial = next;
    }
    let universe = partial;
    let index: HashMap<Coords, usize> = universe.iter().cloned().enumerate().map(|(k, a)| (a, k)).collect();
    let n = universe.len();
    let lookup = |c: &Coords| index.get(c).copied().ok_or_else(|| Error::ClosureFailure(format!("{c:?}")));
    let mut tables: [Vec<usize>; 4] = Default::default();
    for (slot, op) in tables.iter_mut().zip(BIN_OPS) {
        *slot = (0..n * n)
            .into_par_iter()
            .map(|k| lookup(&coordinate_op(s, op, &universe[k / n], &universe[k % n])))
            .collect::<Result<_>>()?;
    }
    let neg = universe.iter().map(|a| lookup(&coordinate_neg(a))).collect::<Result<Vec<_>>>()?;
    let bot = lookup(&s.lattices.iter().map(|l| (l.bot(), l.bot())).collect())?;
    let top = lookup(&s.lattices.iter().map(|l| (l.top(), l.top())).collect())?;
    let algebra = FiniteAlgebra::new(n, tables, neg, bot, top, None)?;
    Ok(ProductBilattice { sequence: s.clone(), universe, algebra, index })
}

/// The map from admissible tuples to structure-preserving maps on the dual
/// of the sequence, together with its inverse.
#[derive(Clone, Debug)]
pub struct Iota {
    pub dual: SequenceDual,
    /// Per level: the set of dual points where an element is 1, back to the element.
    elements_by_points: Vec<HashMap<ElemSet, usize>>,
    levels: Vec<Kn>,
}

impl Iota {
    pub fn new(s: &DefaultSequence) -> Result<Self> {
        let dual = functor_hn(s)?;
        let elements_by_points = s
            .lattices
            .iter()
            .zip(&dual.duals)
            .map(|(l, d)| {
                (0..l.size())
                    .map(|c| (set_from(d.points.len(), (0..d.points.len()).filter(|&z| d.eval(z, c))), c))
                    .collect()
            })
            .collect();
        Ok(Iota { dual, elements_by_points, levels: (0..s.lattices.len()).map(build_kn).collect() })
    }

    /// Sorts are filled in increasing order, so Case 2 can read the value
    /// already assigned at the linked point one level down.
    pub fn apply(&self, s: &DefaultSequence, a: &Coords) -> Result<SortedMap> {
        if !in_universe(s, a) {
            return Err(Error::NotInUniverse);
        }
        let mut map: SortedMap = Vec::with_capacity(a.len());
        for (i, &(at, af)) in a.iter().enumerate() {
            let d = &self.dual.duals[i];
            let mut vals = Vec::with_capacity(d.points.len());
            for z in 0..d.points.len() {
                let lower = (i > 0).then(|| map[i - 1][self.dual.space.links[i - 1][z]]);
                let top_i_below = (i > 0).then(|| KnElem::Top(i).index_in(i - 1).expect("exists"));
                let elem = match lower {
                    Some(v) if Some(v) != top_i_below => KnElem::from_index(i - 1, v).expect("in range"),
                    _ => match (d.eval(z, at), d.eval(z, af)) {
                        (true, true) => KnElem::Top(i),
                        (true, false) => KnElem::T(i),
                        (false, true) => KnElem::F(i),
                        (false, false) => KnElem::Top(i + 1),
                    },
                };
                vals.push(elem.index_in(i).expect("level fits"));
            }
            map.push(vals);
        }
        Ok(map)
    }

    /// Reads a_{i,t} and a_{i,f} off the preimages of ↑t_i and ↑f_i.
    pub fn invert(&self, map: &SortedMap) -> Result<Coords> {
        let mut out = Vec::with_capacity(map.len());
        for (i, vals) in map.iter().enumerate() {
            let k = &self.levels[i];
            let above = |e: KnElem, v: usize| k.k_leq(k.idx(e), v);
            let t_set = set_from(vals.len(), (0..vals.len()).filter(|&z| above(KnElem::T(i), vals[z])));
            let f_set = set_from(vals.len(), (0..vals.len()).filter(|&z| above(KnElem::F(i), vals[z])));
            let lookup = |set: &ElemSet| {
                self.elements_by_points[i]
                    .get(set)
                    .copied()
                    .ok_or_else(|| Error::InvalidDualObject(format!("preimage at level {i} is not clopen up-set")))
            };
            out.push((lookup(&t_set)?, lookup(&f_set)?));
        }
        Ok(out)
    }
}

/// Outcome of comparing the coordinate tables with the tables obtained by
/// transporting the pointwise operations through ι.
#[derive(Clone, Debug)]
pub struct TransportCheck {
    /// ι is a bijection onto all structure-preserving maps.
    pub bijective: bool,
    /// First disagreement as (operation key, a, b), if any.
    pub mismatch: Option<(String, usize, usize)>,
}

impl TransportCheck {
    pub fn passed(&self) -> bool {
        self.bijective && self.mismatch.is_none()
    }
}

pub fn check_transport(p: &ProductBilattice, limit: usize) -> Result<TransportCheck> {
    let s = &p.sequence;
    let iota = Iota::new(s)?;
    let ego = alter_ego(s.n());
    let images: Vec<SortedMap> = p.universe.iter().map(|a| iota.apply(s, a)).collect::<Result<_>>()?;
    let ev = evaluate(&iota.dual.space, &ego, limit)?;
    let mut hit: Vec<usize> = images.iter().filter_map(|m| ev.index_of(m)).collect();
    let all_found = hit.len() == images.len();
    hit.sort_unstable();
    hit.dedup();
    let bijective = all_found && hit.len() == images.len() && ev.maps.len() == images.len();
    for (a, img) in images.iter().enumerate() {
        if iota.invert(img)? != p.universe[a] {
            return Ok(TransportCheck { bijective, mismatch: Some(("inverse".into(), a, a)) });
        }
    }
    let pointwise = |f: &dyn Fn(usize, usize) -> usize, x: &SortedMap| -> SortedMap {
        x.iter().enumerate().map(|(m, v)| v.iter().map(|&u| f(m, u)).collect()).collect()
    };
    let levels: Vec<_> = (0..=s.n()).map(build_kn).collect();
    let n = p.size();
    for op in BIN_OPS {
        let found = (0..n * n).into_par_iter().find_first(|&k| {
            let (a, b) = (k / n, k % n);
            let r: SortedMap = images[a]
                .iter()
                .zip(&images[b])
                .enumerate()
                .map(|(m, (x, y))| x.iter().zip(y).map(|(&u, &v)| levels[m].algebra().op(op, u, v)).collect())
                .collect();
            match iota.invert(&r) {
                Ok(c) => p.index_of(&c) != Some(p.algebra.op(op, a, b)),
                Err(_) => true,
            }
        });
        if let Some(k) = found {
            return Ok(TransportCheck { bijective, mismatch: Some((op.key().into(), k / n, k % n)) });
        }
    }
    for a in 0..n {
        let r = pointwise(&|m, u| levels[m].algebra().neg(u), &images[a]);
        if p.index_of(&iota.invert(&r)?) != Some(p.algebra.neg(a)) {
            return Ok(TransportCheck { bijective, mismatch: Some(("neg".into(), a, a)) });
        }
    }
    let constant = |e: &dyn Fn(usize) -> KnElem| -> SortedMap {
        iota.dual
            .space
            .sorts
            .iter()
            .enumerate()
            .map(|(m, sort)| vec![levels[m].idx(e(m)); sort.size()])
            .collect()
    };
    if p.index_of(&iota.invert(&constant(&|m| KnElem::Top(m + 1)))?) != Some(p.algebra.bot()) {
        return Ok(TransportCheck { bijective, mismatch: Some(("bot".into(), 0, 0)) });
    }
    if p.index_of(&iota.invert(&constant(&|_| KnElem::Top(0)))?) != Some(p.algebra.top()) {
        return Ok(TransportCheck { bijective, mismatch: Some(("top".into(), 0, 0)) });
    }
    Ok(TransportCheck { bijective, mismatch: None })
}

/// The explicit isomorphism from the product of the all-2 sequence onto K_n.
pub fn phi_n(a: &Coords) -> KnElem {
    let n = a.len() - 1;
    for (i, &(t, f)) in a.iter().enumerate() {
        match (t == 1, f == 1) {
            (true, true) => return KnElem::Top(i),
            (true, false) => return KnElem::T(i),
            (false, true) => return KnElem::F(i),
            (false, false) => {}
        }
    }
    KnElem::Top(n + 1)
}

/// An algebra written as the product bilattice of the sequence of its dual.
#[derive(Clone, Debug)]
pub struct ProductRepresentation {
    pub sequence: SpaceSequence,
    pub product: ProductBilattice,
    /// `iso[c]` is the universe index of element c.
    pub iso: Vec<usize>,
    pub is_isomorphism: bool,
}

/// Each element c becomes the tuple whose level-i coordinates are the
/// up-sets {x : x(c) ≥_k t_i} and {x : x(c) ≥_k f_i} of the i-th sort of
/// the dual; this is ι⁻¹ applied to the evaluation at c.
pub fn product_representation(a: &FiniteAlgebra, n: usize, limit: usize) -> Result<ProductRepresentation> {
    let ego = alter_ego(n);
    let dual = dualize(a, &ego)?;
    let sequence = functor_kn(&dual.space)?;
    let product = build_product(&sequence.sequence, limit)?;
    let mut iso = Vec::with_capacity(a.size());
    for c in 0..a.size() {
        let mut coords = Vec::with_capacity(n + 1);
        for (i, hs) in dual.homs.iter().enumerate() {
            let k = ego.level(i);
            let set_for = |e: KnElem| set_from(hs.len(), (0..hs.len()).filter(|&x| k.k_leq(k.idx(e), hs[x][c])));
            let up = &sequence.up_sets[i];
            let t = up.index_of(&set_for(KnElem::T(i))).ok_or(Error::NotInUniverse)?;
            let f = up.index_of(&set_for(KnElem::F(i))).ok_or(Error::NotInUniverse)?;
            coords.push((t, f));
        }
        iso.push(product.index_of(&coords).ok_or(Error::NotInUniverse)?);
    }
    let mut sorted = iso.clone();
    sorted.sort_unstable();
    sorted.dedup();
    let is_isomorphism =
        sorted.len() == a.size() && product.size() == a.size() && is_homomorphism(a, &product.algebra, &iso);
    Ok(ProductRepresentation { sequence, product, iso, is_isomorphism })
}

/// Compares the truth order of the all-2 product with the lexicographic
/// order on level pairs, each pair ordered as in the four-element truth
/// lattice (t ascending, f descending).
pub fn truth_order_lex_check(n: usize) -> Result<bool> {
    let p = build_product(&DefaultSequence::all_two(n), usize::MAX)?;
    let pair_leq = |(t, f): (usize, usize), (t2, f2): (usize, usize)| t <= t2 && f >= f2;
    let lex_leq = |a: &Coords, b: &Coords| match a.iter().zip(b).position(|(x, y)| x != y) {
        None => true,
        Some(i) => pair_leq(a[i], b[i]),
    };
    let size = p.size();
    Ok((0..size).all(|a| {
        (0..size).all(|b| p.algebra.t_leq(a, b) == lex_leq(&p.universe[a], &p.universe[b]))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_two_universe_sizes() {
        for n in 0..5 {
            let s = DefaultSequence::all_two(n);
            assert_eq!(count_universe(&s), 3 * n as u128 + 4);
            assert_eq!(build_product(&s, 1000).unwrap().size(), 3 * n + 4);
        }
    }

    #[test]
    fn middle_of_chain_is_not_complemented() {
        let two_to_middle = validate_sequence(&[DistLattice::two(), DistLattice::chain(3)], &[vec![0, 1]]);
        assert_eq!(two_to_middle, Err(SequenceDefect::NotAHom { j: 1 }));
        let chain = DistLattice::chain(3);
        let err = validate_sequence(&[chain.clone(), chain], &[vec![0, 1, 2]]);
        assert_eq!(err, Err(SequenceDefect::NotComplemented { j: 1, c: 1 }));
    }

    #[test]
    fn meets_at_level_one() {
        let s = DefaultSequence::all_two(1);
        let p = build_product(&s, 100).unwrap();
        let find = |bits: &str| (0..p.size()).find(|&a| p.bit_label(a) == bits).unwrap();
        let meet = |x: &str, y: &str| p.bit_label(p.algebra.op(BinOp::TMeet, find(x), find(y)));
        assert_eq!(meet("1011", "0000"), "0000");
        assert_eq!(meet("0011", "0000"), "0001");
    }

    #[test]
    fn overflow_is_reported() {
        let s = DefaultSequence::new(vec![DistLattice::boolean(3); 2], vec![(0..8).collect()]).unwrap();
        assert!(matches!(build_product(&s, 10), Err(Error::SizeOverflow { .. })));
    }
}
