//! The multisorted natural duality for the variety generated by K_n, its
//! link with Priestley duality on knowledge reducts, and the single-sorted
//! duality for the quasivariety generated by K_n alone.
//!
//! A dual object has sorts X_0..X_n, each a poset, and links
//! g_i: X_i → X_{i-1}. The alter ego has sort m equal to K_m ordered by
//! S_{m,m} and links h_{i,i-1}.

use std::collections::HashMap;

use crate::algebra::{homs, is_homomorphism, BinOp, FiniteAlgebra, BIN_OPS};
use crate::error::{Error, Result};
use crate::kn::{build_kn, h_nm, s_nm, Kn, KnElem};
use crate::poset::{DoubledPoint, ElemSet, MonotoneMap, Poset, QuasiOrder};

/// Sorted posets with linking maps; `links[i - 1]` maps sort i to sort i-1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultisortedSpace {
    pub sorts: Vec<Poset>,
    pub links: Vec<Vec<usize>>,
}

impl MultisortedSpace {
    /// Checks only that every link is a total map between the right sorts.
    pub fn new(sorts: Vec<Poset>, links: Vec<Vec<usize>>) -> Result<Self> {
        let x = MultisortedSpace { sorts, links };
        x.check_links_total()?;
        Ok(x)
    }

    pub fn num_sorts(&self) -> usize {
        self.sorts.len()
    }

    pub fn num_points(&self) -> usize {
        self.sorts.iter().map(Poset::size).sum()
    }

    fn check_links_total(&self) -> Result<()> {
        if self.sorts.is_empty() {
            return Err(Error::InvalidDualObject("no sorts".into()));
        }
        if self.links.len() + 1 != self.sorts.len() {
            return Err(Error::InvalidDualObject(format!(
                "{} sorts need {} links, found {}",
                self.sorts.len(),
                self.sorts.len() - 1,
                self.links.len()
            )));
        }
        for (k, link) in self.links.iter().enumerate() {
            let i = k + 1;
            if link.len() != self.sorts[i].size() {
                return Err(Error::InvalidDualObject(format!("link g_{i} is not defined on all of sort {i}")));
            }
            if link.iter().any(|&v| v >= self.sorts[i - 1].size()) {
                return Err(Error::InvalidDualObject(format!("link g_{i} leaves sort {}", i - 1)));
            }
        }
        Ok(())
    }

    /// Membership in the dual category at finite scale: sorts are posets
    /// (guaranteed by the type), links are total maps, and points related in
    /// a sort have the same image under its link.
    pub fn check_dual_object(&self) -> Result<()> {
        self.check_links_total()?;
        for (k, link) in self.links.iter().enumerate() {
            let i = k + 1;
            let p = &self.sorts[i];
            for x in 0..p.size() {
                for y in 0..p.size() {
                    if p.leq(x, y) && link[x] != link[y] {
                        return Err(Error::InvalidDualObject(format!(
                            "points {x} <= {y} in sort {i} have different images under g_{i}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Links as monotone maps (requires a valid dual object).
    pub fn link_maps(&self) -> Result<Vec<MonotoneMap>> {
        self.links
            .iter()
            .enumerate()
            .map(|(k, l)| MonotoneMap::new(self.sorts[k + 1].clone(), self.sorts[k].clone(), l.clone()))
            .collect()
    }

    /// `g_{i+1} ∘ … ∘ g_j`, mapping sort j down to sort i.
    pub fn composite_link(&self, j: usize, i: usize) -> Vec<usize> {
        assert!(i <= j);
        let mut map: Vec<usize> = (0..self.sorts[j].size()).collect();
        for level in (i + 1..=j).rev() {
            for v in &mut map {
                *v = self.links[level - 1][*v];
            }
        }
        map
    }
}

/// The alter ego for level n: sorts K_0..K_n with S_{m,m}, links h_{i,i-1}.
#[derive(Clone, Debug)]
pub struct AlterEgo {
    n: usize,
    levels: Vec<Kn>,
    orders: Vec<Poset>,
    links: Vec<Vec<usize>>,
}

pub fn alter_ego(n: usize) -> AlterEgo {
    let levels: Vec<Kn> = (0..=n).map(build_kn).collect();
    let orders = (0..=n)
        .map(|m| s_nm(m, m).and_then(QuasiOrder::into_poset).expect("S_{m,m} is a partial order"))
        .collect();
    let links = (1..=n).map(|i| h_nm(i, i - 1).expect("valid indices")).collect();
    AlterEgo { n, levels, orders, links }
}

impl AlterEgo {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn level(&self, m: usize) -> &Kn {
        &self.levels[m]
    }

    pub fn order(&self, m: usize) -> &Poset {
        &self.orders[m]
    }

    /// h_{i,i-1} as a table.
    pub fn link(&self, i: usize) -> &[usize] {
        &self.links[i - 1]
    }

    pub fn num_relations(&self) -> usize {
        self.orders.len()
    }

    pub fn num_operations(&self) -> usize {
        self.links.len()
    }

    /// The alter ego viewed as a dual object.
    pub fn space(&self) -> MultisortedSpace {
        MultisortedSpace { sorts: self.orders.clone(), links: self.links.clone() }
    }

    /// The k-th power: sort m is K_m^k with the pointwise S_{m,m} and the
    /// pointwise link.
    pub fn power_space(&self, k: usize) -> MultisortedSpace {
        let sorts: Vec<Poset> = self.orders.iter().map(|p| Poset::product(&vec![p; k])).collect();
        let links = (1..=self.n)
            .map(|i| {
                let upper = vec![self.levels[i].size(); k];
                let lower = vec![self.levels[i - 1].size(); k];
                (0..sorts[i].size())
                    .map(|idx| {
                        let d: Vec<usize> = crate::algebra::tuple_digits(&upper, idx)
                            .into_iter()
                            .map(|v| self.links[i - 1][v])
                            .collect();
                        crate::algebra::tuple_index(&lower, &d)
                    })
                    .collect()
            })
            .collect();
        MultisortedSpace { sorts, links }
    }
}

/// Which parts of the alter ego structure a map must preserve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Retained {
    /// `relations[m]`: preserve S_{m,m} on sort m.
    pub relations: Vec<bool>,
    /// `links[i - 1]`: commute with h_{i,i-1}.
    pub links: Vec<bool>,
}

impl Retained {
    pub fn all(n: usize) -> Self {
        Retained { relations: vec![true; n + 1], links: vec![true; n] }
    }

    pub fn without_relation(n: usize, m: usize) -> Self {
        let mut r = Retained::all(n);
        r.relations[m] = false;
        r
    }

    pub fn without_link(n: usize, i: usize) -> Self {
        let mut r = Retained::all(n);
        r.links[i - 1] = false;
        r
    }
}

/// A sort-respecting map from a dual object into the alter ego:
/// `map[m][x]` is the image of point x of sort m, an element of K_m.
pub type SortedMap = Vec<Vec<usize>>;

/// The dual of an algebra: sort m lists the homomorphisms into K_m.
#[derive(Clone, Debug)]
pub struct Dual {
    pub space: MultisortedSpace,
    /// `homs[m][x]` is the table of point x of sort m.
    pub homs: Vec<Vec<Vec<usize>>>,
}

impl Dual {
    /// The evaluation of element `c` as a map on the dual.
    pub fn evaluation(&self, c: usize) -> SortedMap {
        self.homs.iter().map(|sort| sort.iter().map(|h| h[c]).collect()).collect()
    }
}

pub fn dualize(a: &FiniteAlgebra, ego: &AlterEgo) -> Result<Dual> {
    let n = ego.n();
    let homs_per_sort: Vec<Vec<Vec<usize>>> = (0..=n).map(|m| homs(a, ego.level(m).algebra())).collect();
    for c in 0..a.size() {
        for d in c + 1..a.size() {
            if !homs_per_sort.iter().flatten().any(|h| h[c] != h[d]) {
                return Err(Error::NotInVariety(n));
            }
        }
    }
    let sorts: Vec<Poset> = homs_per_sort
        .iter()
        .enumerate()
        .map(|(m, hs)| {
            let s = ego.order(m);
            Poset::from_fn(hs.len(), |x, y| (0..a.size()).all(|c| s.leq(hs[x][c], hs[y][c])))
                .expect("pointwise lift of a partial order")
        })
        .collect();
    let mut links = Vec::with_capacity(n);
    for i in 1..=n {
        let lower: HashMap<&Vec<usize>, usize> = homs_per_sort[i - 1].iter().enumerate().map(|(k, h)| (h, k)).collect();
        let link: Vec<usize> = homs_per_sort[i]
            .iter()
            .map(|h| {
                let composed: Vec<usize> = h.iter().map(|&v| ego.link(i)[v]).collect();
                lower[&composed]
            })
            .collect();
        links.push(link);
    }
    Ok(Dual { space: MultisortedSpace { sorts, links }, homs: homs_per_sort })
}

fn check_against_ego(x: &MultisortedSpace, ego: &AlterEgo) -> Result<()> {
    if x.num_sorts() != ego.n() + 1 {
        return Err(Error::InvalidDualObject(format!(
            "expected {} sorts, found {}",
            ego.n() + 1,
            x.num_sorts()
        )));
    }
    x.check_dual_object()
}

/// Visit every map `x → alter ego` preserving the retained structure.
///
/// Sorts are filled in increasing order. A point of sort i ≥ 1 whose link
/// is retained may only take values in the preimage, under h_{i,i-1}, of
/// the value already chosen for its image; order constraints against
/// earlier points of the same sort are checked as each value is placed.
/// The visitor returns `false` to stop early.
pub fn for_each_structure_preserving_map(
    x: &MultisortedSpace,
    ego: &AlterEgo,
    keep: &Retained,
    visit: &mut dyn FnMut(&SortedMap) -> bool,
) -> Result<()> {
    check_against_ego(x, ego)?;
    let n = ego.n();
    let mut preimages: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
    for i in 1..=n {
        let mut pre = vec![Vec::new(); ego.level(i - 1).size()];
        for (a, &v) in ego.link(i).iter().enumerate() {
            pre[v].push(a);
        }
        preimages.push(pre);
    }
    let all_values: Vec<Vec<usize>> = (0..=n).map(|m| (0..ego.level(m).size()).collect()).collect();
    let points: Vec<(usize, usize)> = (0..=n).flat_map(|m| (0..x.sorts[m].size()).map(move |p| (m, p))).collect();
    let mut map: SortedMap = x.sorts.iter().map(|s| vec![usize::MAX; s.size()]).collect();
    let ctx = MapSearch { x, ego, keep, preimages: &preimages, all_values: &all_values, points: &points };
    ctx.rec(0, &mut map, visit);
    Ok(())
}

struct MapSearch<'a> {
    x: &'a MultisortedSpace,
    ego: &'a AlterEgo,
    keep: &'a Retained,
    preimages: &'a [Vec<Vec<usize>>],
    all_values: &'a [Vec<usize>],
    points: &'a [(usize, usize)],
}

impl MapSearch<'_> {
    fn rec(&self, depth: usize, map: &mut SortedMap, visit: &mut dyn FnMut(&SortedMap) -> bool) -> bool {
        if depth == self.points.len() {
            return visit(map);
        }
        let (m, p) = self.points[depth];
        let candidates: &[usize] = if m >= 1 && self.keep.links[m - 1] {
            let below = map[m - 1][self.x.links[m - 1][p]];
            &self.preimages[m][below]
        } else {
            &self.all_values[m]
        };
        let sort = &self.x.sorts[m];
        let s = self.ego.order(m);
        for &v in candidates {
            if self.keep.relations[m] {
                let ok = (0..p).all(|q| {
                    let w = map[m][q];
                    (!sort.leq(q, p) || s.leq(w, v)) && (!sort.leq(p, q) || s.leq(v, w))
                });
                if !ok {
                    continue;
                }
            }
            map[m][p] = v;
            let go_on = self.rec(depth + 1, map, visit);
            map[m][p] = usize::MAX;
            if !go_on {
                return false;
            }
        }
        true
    }
}

pub fn structure_preserving_maps(x: &MultisortedSpace, ego: &AlterEgo, keep: &Retained) -> Result<Vec<SortedMap>> {
    let mut out = Vec::new();
    for_each_structure_preserving_map(x, ego, keep, &mut |m| {
        out.push(m.clone());
        true
    })?;
    Ok(out)
}

pub fn count_structure_preserving_maps(x: &MultisortedSpace, ego: &AlterEgo, keep: &Retained) -> Result<u128> {
    let mut count: u128 = 0;
    for_each_structure_preserving_map(x, ego, keep, &mut |_| {
        count += 1;
        true
    })?;
    Ok(count)
}

/// The algebra of structure-preserving maps with pointwise operations.
#[derive(Clone, Debug)]
pub struct Evaluated {
    pub maps: Vec<SortedMap>,
    pub algebra: FiniteAlgebra,
    index: HashMap<SortedMap, usize>,
}

impl Evaluated {
    pub fn index_of(&self, map: &SortedMap) -> Option<usize> {
        self.index.get(map).copied()
    }
}

pub fn evaluate(x: &MultisortedSpace, ego: &AlterEgo, limit: usize) -> Result<Evaluated> {
    let keep = Retained::all(ego.n());
    let mut maps = Vec::new();
    let mut overflow = false;
    for_each_structure_preserving_map(x, ego, &keep, &mut |m| {
        if maps.len() >= limit {
            overflow = true;
            return false;
        }
        maps.push(m.clone());
        true
    })?;
    if overflow {
        let size = count_structure_preserving_maps(x, ego, &keep)?;
        return Err(Error::SizeOverflow { size, limit: limit as u128 });
    }
    let index: HashMap<SortedMap, usize> = maps.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let size = maps.len();
    let pointwise = |f: &dyn Fn(usize, usize) -> usize, src: &SortedMap| -> SortedMap {
        src.iter()
            .enumerate()
            .map(|(m, vals)| vals.iter().map(|&v| f(m, v)).collect())
            .collect()
    };
    let tables = BIN_OPS.map(|op| {
        let mut t = Vec::with_capacity(size * size);
        for a in &maps {
            for b in &maps {
                let r: SortedMap = a
                    .iter()
                    .zip(b)
                    .enumerate()
                    .map(|(m, (va, vb))| {
                        let alg = ego.level(m).algebra();
                        va.iter().zip(vb).map(|(&u, &w)| alg.op(op, u, w)).collect()
                    })
                    .collect();
                t.push(index[&r]);
            }
        }
        t
    });
    let neg = maps
        .iter()
        .map(|a| index[&pointwise(&|m, v| ego.level(m).algebra().neg(v), a)])
        .collect();
    let constant = |e: &dyn Fn(usize) -> KnElem| -> SortedMap {
        x.sorts
            .iter()
            .enumerate()
            .map(|(m, s)| vec![ego.level(m).idx(e(m)); s.size()])
            .collect()
    };
    let bot = index[&constant(&|m| KnElem::Top(m + 1))];
    let top = index[&constant(&|_| KnElem::Top(0))];
    let algebra = FiniteAlgebra::new_unchecked(size, tables, neg, bot, top, None);
    Ok(Evaluated { maps, algebra, index })
}

/// Outcome of checking that the evaluation map of an algebra is an
/// isomorphism onto the algebra of maps on its dual.
#[derive(Clone, Debug)]
pub struct DualityCheck {
    pub dual: Dual,
    pub evaluated: Evaluated,
    /// `evaluation[c]` is the index of the evaluation at c, or `None` if it
    /// is not structure-preserving.
    pub evaluation: Vec<Option<usize>>,
    pub is_isomorphism: bool,
}

pub fn check_duality(a: &FiniteAlgebra, ego: &AlterEgo, limit: usize) -> Result<DualityCheck> {
    let dual = dualize(a, ego)?;
    let evaluated = evaluate(&dual.space, ego, limit)?;
    let evaluation: Vec<Option<usize>> = (0..a.size()).map(|c| evaluated.index_of(&dual.evaluation(c))).collect();
    let table: Option<Vec<usize>> = evaluation.iter().copied().collect();
    let is_isomorphism = match &table {
        Some(t) => {
            let mut sorted = t.clone();
            sorted.sort_unstable();
            sorted.dedup();
            sorted.len() == a.size()
                && evaluated.maps.len() == a.size()
                && is_homomorphism(a, &evaluated.algebra, t)
        }
        None => false,
    };
    Ok(DualityCheck { dual, evaluated, evaluation, is_isomorphism })
}

/// The counit at a dual object: each point becomes the evaluation at that
/// point, a homomorphism from the algebra of maps into some K_m. Returns
/// whether this is an isomorphism of dual objects.
pub fn check_counit(x: &MultisortedSpace, ego: &AlterEgo, limit: usize) -> Result<bool> {
    let ev = evaluate(x, ego, limit)?;
    let back = dualize(&ev.algebra, ego)?;
    let mut images: Vec<Vec<usize>> = Vec::new();
    for (m, sort) in x.sorts.iter().enumerate() {
        let lookup: HashMap<&Vec<usize>, usize> = back.homs[m].iter().enumerate().map(|(k, h)| (h, k)).collect();
        let mut img = Vec::with_capacity(sort.size());
        for p in 0..sort.size() {
            let hom: Vec<usize> = ev.maps.iter().map(|f| f[m][p]).collect();
            match lookup.get(&hom) {
                Some(&k) => img.push(k),
                None => return Ok(false),
            }
        }
        let mut sorted = img.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != sort.size() || back.space.sorts[m].size() != sort.size() {
            return Ok(false);
        }
        for p in 0..sort.size() {
            for q in 0..sort.size() {
                if sort.leq(p, q) != back.space.sorts[m].leq(img[p], img[q]) {
                    return Ok(false);
                }
            }
        }
        images.push(img);
    }
    for i in 1..x.num_sorts() {
        for p in 0..x.sorts[i].size() {
            if images[i - 1][x.links[i - 1][p]] != back.space.links[i - 1][images[i][p]] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The free algebra on k generators, as the algebra of maps on the k-th
/// power of the alter ego.
pub fn free_algebra(n: usize, k: usize, limit: usize) -> Result<Evaluated> {
    let ego = alter_ego(n);
    evaluate(&ego.power_space(k), &ego, limit)
}

/// The size of the free algebra on k generators, counted as the number of
/// up-sets of the Priestley space reconstructed from the k-th power of the
/// alter ego.
pub fn free_algebra_size(n: usize, k: usize) -> Result<u128> {
    let ego = alter_ego(n);
    let y = priestley_reconstruction(&ego.power_space(k))?;
    y.poset.count_up_sets().ok_or(Error::SizeOverflow { size: u128::MAX, limit: u128::MAX })
}

/// The same size, counted by enumerating maps without building tables.
pub fn free_algebra_size_by_maps(n: usize, k: usize) -> Result<u128> {
    let ego = alter_ego(n);
    count_structure_preserving_maps(&ego.power_space(k), &ego, &Retained::all(n))
}

/// Which of the two two-valued maps on K_i: `T` has 1-set ↑t_i, `F` has
/// 1-set ↑f_i (up-sets in the knowledge order).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarity {
    T,
    F,
}

impl Polarity {
    pub const BOTH: [Polarity; 2] = [Polarity::T, Polarity::F];
}

/// The two-valued map on K_i of the given polarity.
pub fn two_valued(ego: &AlterEgo, i: usize, pol: Polarity) -> Vec<bool> {
    let kn = ego.level(i);
    let base = kn.idx(match pol {
        Polarity::T => KnElem::T(i),
        Polarity::F => KnElem::F(i),
    });
    (0..kn.size()).map(|a| kn.k_leq(base, a)).collect()
}

/// A point of the reconstructed Priestley space: a point of some sort
/// together with a polarity. Laid out as in [`crate::poset::doubling`].
#[derive(Clone, Debug)]
pub struct Reconstruction {
    pub poset: Poset,
    pub points: Vec<DoubledPoint>,
}

impl Reconstruction {
    pub fn polarity(&self, k: usize) -> Polarity {
        if self.points[k].copy == 0 {
            Polarity::T
        } else {
            Polarity::F
        }
    }
}

/// The Priestley space of the knowledge reduct, rebuilt from a dual object.
///
/// Points are pairs (x, polarity) over all sorts. Within one sort and one
/// polarity the order is that of the sort. Across levels, (x, ·) at level i
/// lies below (y, ·) at level j > i whenever x is the image of y under the
/// composite link, for every combination of polarities. The stated relation
/// is closed transitively and then checked to be antisymmetric.
pub fn priestley_reconstruction(x: &MultisortedSpace) -> Result<Reconstruction> {
    x.check_dual_object()?;
    let mut points = Vec::new();
    let mut base = Vec::new();
    for (layer, sort) in x.sorts.iter().enumerate() {
        base.push(points.len());
        for copy in 0..2 {
            for elem in 0..sort.size() {
                points.push(DoubledPoint { layer, copy, elem });
            }
        }
    }
    let idx = |layer: usize, copy: usize, elem: usize| base[layer] + copy * x.sorts[layer].size() + elem;
    let mut pairs = Vec::new();
    for (layer, sort) in x.sorts.iter().enumerate() {
        for copy in 0..2 {
            for (a, b) in sort.as_quasi_order().pairs() {
                pairs.push((idx(layer, copy, a), idx(layer, copy, b)));
            }
        }
    }
    for j in 1..x.num_sorts() {
        for i in 0..j {
            let comp = x.composite_link(j, i);
            for (y, &xi) in comp.iter().enumerate() {
                for ci in 0..2 {
                    for cj in 0..2 {
                        pairs.push((idx(i, ci, xi), idx(j, cj, y)));
                    }
                }
            }
        }
    }
    let poset = Poset::from_pairs(points.len(), pairs).map_err(|e| match e {
        Error::NotAntisymmetric(a, b) => {
            Error::InvalidDualObject(format!("reconstructed relation identifies points {a} and {b}"))
        }
        other => other,
    })?;
    Ok(Reconstruction { poset, points })
}

/// A witness that a ≠ b in K_m are told apart by some two-valued map at
/// some level j ≤ m after collapsing with h_{m,j}.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeparationWitness {
    pub m: usize,
    pub a: usize,
    pub b: usize,
    pub j: usize,
    pub polarity: Polarity,
}

pub fn separation_check(n: usize) -> Result<Vec<SeparationWitness>> {
    let ego = alter_ego(n);
    let mut out = Vec::new();
    for m in 0..=n {
        let size = ego.level(m).size();
        let collapse: Vec<Vec<usize>> = (0..=m).map(|j| h_nm(m, j).expect("j <= m")).collect();
        for a in 0..size {
            for b in 0..size {
                if a == b {
                    continue;
                }
                let found = (0..=m).find_map(|j| {
                    Polarity::BOTH.into_iter().find_map(|pol| {
                        let w = two_valued(&ego, j, pol);
                        (w[collapse[j][a]] != w[collapse[j][b]]).then_some(SeparationWitness { m, a, b, j, polarity: pol })
                    })
                });
                match found {
                    Some(w) => out.push(w),
                    None => return Err(Error::NoWitness(format!("{a} and {b} in K_{m} are not separated"))),
                }
            }
        }
    }
    Ok(out)
}

/// The subalgebras of K_j × K_m that are maximal among those contained in
/// {(a, b) : ω(a) ≤ ω'(b)}, where ω on K_j and ω' on K_m are two-valued maps.
pub fn maximal_relations(j: usize, pj: Polarity, m: usize, pm: Polarity) -> Result<Vec<ElemSet>> {
    let ego = alter_ego(j.max(m));
    let kj = ego.level(j).algebra();
    let km = ego.level(m).algebra();
    let prod = crate::algebra::product(&[kj, km], usize::MAX)?;
    let wj = two_valued(&ego, j, pj);
    let wm = two_valued(&ego, m, pm);
    let ms = km.size();
    let fits = |s: &ElemSet| s.ones().all(|p| !wj[p / ms] || wm[p % ms]);
    let contained: Vec<ElemSet> = prod.all_subalgebras().into_iter().filter(|s| fits(s)).collect();
    Ok(contained
        .iter()
        .filter(|s| !contained.iter().any(|t| t != *s && s.is_subset(t)))
        .cloned()
        .collect())
}

/// What the maximal-relation sets are expected to be: S_{m,m} for the same
/// level and polarity, nothing for the same level with different
/// polarities or for j > m, and for j < m the single relation
/// {(a, b) : (a, h_{m,j}(b)) ∈ S_{j,j}}, which strictly contains the
/// converse graph of h_{m,j}.
pub fn expected_maximal_relations(j: usize, pj: Polarity, m: usize, pm: Polarity) -> Result<Vec<ElemSet>> {
    let sj = 3 * j + 4;
    let sm = 3 * m + 4;
    if j == m && pj == pm {
        let s = s_nm(m, m)?;
        Ok(vec![crate::algebra::relation_as_set(sj, sm, |a, b| s.leq(a, b))])
    } else if j >= m {
        Ok(Vec::new())
    } else {
        let h = h_nm(m, j)?;
        let s = s_nm(j, j)?;
        Ok(vec![crate::algebra::relation_as_set(sj, sm, |a, b| s.leq(a, h[b]))])
    }
}

/// The converse graph {(h_{m,j}(b), b)} as a subset of K_j × K_m.
pub fn converse_graph(m: usize, j: usize) -> Result<ElemSet> {
    let h = h_nm(m, j)?;
    Ok(crate::algebra::relation_as_set(3 * j + 4, 3 * m + 4, |a, b| h[b] == a))
}

/// Structure dropped from the alter ego when testing optimality.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dropped {
    Nothing,
    /// Drop S_{m,m}.
    Relation(usize),
    /// Drop h_{m,m-1}.
    Link(usize),
}

/// The algebra on which a dropped piece of structure is tested: the
/// subalgebra S_{m,m} of K_m² for a relation, K_m for a link.
pub fn optimality_test_algebra(dropped: Dropped) -> Result<FiniteAlgebra> {
    match dropped {
        Dropped::Relation(m) => {
            let km = build_kn(m);
            let sq = crate::algebra::power(km.algebra(), 2, usize::MAX)?;
            let s = s_nm(m, m)?;
            let set = crate::kn::relation_subset(km.size(), &s);
            Ok(sq.subalgebra(&set)?.0)
        }
        Dropped::Link(m) => Ok(build_kn(m).into_algebra()),
        Dropped::Nothing => Ok(build_kn(0).into_algebra()),
    }
}

/// Maps on the dual of `a` that preserve `keep` but are not evaluations.
pub fn non_evaluation_maps(a: &FiniteAlgebra, ego: &AlterEgo, keep: &Retained) -> Result<(Dual, Vec<SortedMap>)> {
    let dual = dualize(a, ego)?;
    let evals: std::collections::HashSet<SortedMap> = (0..a.size()).map(|c| dual.evaluation(c)).collect();
    let maps = structure_preserving_maps(&dual.space, ego, keep)?;
    let extra = maps.into_iter().filter(|m| !evals.contains(m)).collect();
    Ok((dual, extra))
}

#[derive(Clone, Debug)]
pub struct OptimalityReport {
    pub test_algebra: FiniteAlgebra,
    pub dual: Dual,
    /// All structure-preserving maps that are not evaluations, in search order.
    pub non_evaluation_maps: Vec<SortedMap>,
    /// The witness built by hand (see [`explicit_witness`]).
    pub explicit: SortedMap,
    pub explicit_found: bool,
}

impl OptimalityReport {
    pub fn witness(&self) -> &SortedMap {
        &self.non_evaluation_maps[0]
    }
}

/// Search for a map on the dual of the test algebra that preserves all
/// structure except `dropped` yet is not an evaluation.
pub fn optimality_witness(n: usize, dropped: Dropped) -> Result<OptimalityReport> {
    let keep = match dropped {
        Dropped::Relation(m) if m <= n => Retained::without_relation(n, m),
        Dropped::Link(m) if (1..=n).contains(&m) => Retained::without_link(n, m),
        Dropped::Nothing => Retained::all(n),
        Dropped::Relation(m) | Dropped::Link(m) => return Err(Error::BadIndices { n, m }),
    };
    let ego = alter_ego(n);
    let test_algebra = optimality_test_algebra(dropped)?;
    let (dual, non_evaluation_maps) = non_evaluation_maps(&test_algebra, &ego, &keep)?;
    if non_evaluation_maps.is_empty() {
        return Err(Error::NoWitness(format!("{dropped:?} at level {n}")));
    }
    let explicit = explicit_witness(&ego, &dual, dropped);
    let explicit_found = non_evaluation_maps.contains(&explicit);
    Ok(OptimalityReport { test_algebra, dual, non_evaluation_maps, explicit, explicit_found })
}

/// The hand-built witnesses. Dropping S_{m,m}: on the dual of S_{m,m}
/// send the first projection to f_m, the second to t_m and the single
/// point of each lower sort j to ⊤_{j+1}. Dropping h_{m,m-1}: on the dual
/// of K_m send the identity to ⊤_{m-1} and h_{m,i} (i < m) to ⊤_{i+1}.
pub fn explicit_witness(ego: &AlterEgo, dual: &Dual, dropped: Dropped) -> SortedMap {
    let mut map: SortedMap = dual.space.sorts.iter().map(|s| vec![usize::MAX; s.size()]).collect();
    match dropped {
        Dropped::Relation(m) => {
            let km = ego.level(m);
            let size = km.size();
            let set: Vec<usize> = crate::kn::relation_subset(size, &s_nm(m, m).expect("m <= m")).ones().collect();
            for (x, h) in dual.homs[m].iter().enumerate() {
                let first = (0..set.len()).all(|c| h[c] == set[c] / size);
                map[m][x] = km.idx(if first { KnElem::F(m) } else { KnElem::T(m) });
            }
            for j in 0..m {
                for v in map[j].iter_mut() {
                    *v = ego.level(j).idx(KnElem::Top(j + 1));
                }
            }
        }
        Dropped::Link(m) => {
            for v in map[m].iter_mut() {
                *v = ego.level(m).idx(KnElem::Top(m - 1));
            }
            for i in 0..m {
                for v in map[i].iter_mut() {
                    *v = ego.level(i).idx(KnElem::Top(i + 1));
                }
            }
        }
        Dropped::Nothing => {}
    }
    map
}

/// A dual object for the quasivariety duality: one set of points carrying
/// quasi-orders `orders[i]` (i = 0..n), lifted pointwise from S_{n,n-i}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiSpace {
    pub size: usize,
    pub orders: Vec<QuasiOrder>,
}

/// The single-sorted alter ego: K_n carrying S_{n,n}, …, S_{n,0}.
pub fn quasi_alter_ego(n: usize) -> QuasiSpace {
    QuasiSpace {
        size: 3 * n + 4,
        orders: (0..=n).map(|i| s_nm(n, n - i).expect("valid indices")).collect(),
    }
}

#[derive(Clone, Debug)]
pub struct QuasiDual {
    pub space: QuasiSpace,
    pub homs: Vec<Vec<usize>>,
}

pub fn quasivariety_dualize(a: &FiniteAlgebra, n: usize) -> Result<QuasiDual> {
    let kn = build_kn(n);
    let hs = homs(a, kn.algebra());
    for c in 0..a.size() {
        for d in c + 1..a.size() {
            if !hs.iter().any(|h| h[c] != h[d]) {
                return Err(Error::NotInQuasivariety(n));
            }
        }
    }
    let ego = quasi_alter_ego(n);
    let orders = ego
        .orders
        .iter()
        .map(|s| {
            QuasiOrder::from_fn(hs.len(), |x, y| (0..a.size()).all(|c| s.leq(hs[x][c], hs[y][c])))
                .expect("pointwise lift of a quasi-order")
        })
        .collect();
    Ok(QuasiDual { space: QuasiSpace { size: hs.len(), orders }, homs: hs })
}

/// Maps from a quasi-space into K_n preserving every quasi-order.
pub fn quasivariety_maps(x: &QuasiSpace, n: usize) -> Result<Vec<Vec<usize>>> {
    if x.orders.len() != n + 1 {
        return Err(Error::InvalidDualObject(format!("expected {} quasi-orders, found {}", n + 1, x.orders.len())));
    }
    let ego = quasi_alter_ego(n);
    let mut out = Vec::new();
    let mut map = vec![usize::MAX; x.size];
    quasi_rec(x, &ego, 0, &mut map, &mut out);
    Ok(out)
}

fn quasi_rec(x: &QuasiSpace, ego: &QuasiSpace, p: usize, map: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if p == x.size {
        out.push(map.clone());
        return;
    }
    for v in 0..ego.size {
        let ok = x.orders.iter().zip(&ego.orders).all(|(r, s)| {
            (0..p).all(|q| (!r.leq(q, p) || s.leq(map[q], v)) && (!r.leq(p, q) || s.leq(v, map[q])))
        });
        if ok {
            map[p] = v;
            quasi_rec(x, ego, p + 1, map, out);
        }
    }
    map[p] = usize::MAX;
}

/// The algebra of maps on a quasi-space, with pointwise operations.
pub fn quasivariety_evaluate(x: &QuasiSpace, n: usize) -> Result<(Vec<Vec<usize>>, FiniteAlgebra)> {
    let kn = build_kn(n);
    let k = kn.algebra();
    let maps = quasivariety_maps(x, n)?;
    let index: HashMap<&Vec<usize>, usize> = maps.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let size = maps.len();
    let tables = BIN_OPS.map(|op: BinOp| {
        let mut t = Vec::with_capacity(size * size);
        for a in &maps {
            for b in &maps {
                let r: Vec<usize> = a.iter().zip(b).map(|(&u, &w)| k.op(op, u, w)).collect();
                t.push(index[&r]);
            }
        }
        t
    });
    let neg = maps
        .iter()
        .map(|a| index[&a.iter().map(|&v| k.neg(v)).collect::<Vec<_>>()])
        .collect();
    let bot = index[&vec![k.bot(); x.size]];
    let top = index[&vec![k.top(); x.size]];
    let alg = FiniteAlgebra::new_unchecked(size, tables, neg, bot, top, None);
    Ok((maps, alg))
}

/// Whether the evaluation map into the algebra of maps on the quasivariety
/// dual is an isomorphism.
pub fn check_quasivariety_duality(a: &FiniteAlgebra, n: usize) -> Result<bool> {
    let dual = quasivariety_dualize(a, n)?;
    let (maps, alg) = quasivariety_evaluate(&dual.space, n)?;
    if maps.len() != a.size() {
        return Ok(false);
    }
    let index: HashMap<&Vec<usize>, usize> = maps.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut table = Vec::with_capacity(a.size());
    for c in 0..a.size() {
        let e: Vec<usize> = dual.homs.iter().map(|h| h[c]).collect();
        match index.get(&e) {
            Some(&i) => table.push(i),
            None => return Ok(false),
        }
    }
    let mut sorted = table.clone();
    sorted.sort_unstable();
    sorted.dedup();
    Ok(sorted.len() == a.size() && is_homomorphism(a, &alg, &table))
}

/// The finite form of the dual-category conditions for the quasivariety:
/// the first relation is a partial order, the relations increase, and the
/// converse of each relation is contained in every later one.
pub fn check_quasi_dual_object(x: &QuasiSpace) -> Result<()> {
    let first = x
        .orders
        .first()
        .ok_or_else(|| Error::InvalidDualObject("no relations".into()))?;
    if !first.is_antisymmetric() {
        return Err(Error::InvalidDualObject("condition (i): first relation is not a partial order".into()));
    }
    for (i, r) in x.orders.iter().enumerate() {
        if r.size() != x.size {
            return Err(Error::InvalidDualObject(format!("relation {i} has the wrong size")));
        }
        r.validate().map_err(|e| Error::InvalidDualObject(format!("condition (ii): relation {i}: {e}")))?;
    }
    for i in 1..x.orders.len() {
        if !x.orders[i - 1].is_contained_in(&x.orders[i]) {
            return Err(Error::InvalidDualObject(format!("condition (iii): relation {} not inside relation {i}", i - 1)));
        }
    }
    for i in 0..x.orders.len() {
        let conv = x.orders[i].converse();
        for j in i + 1..x.orders.len() {
            if !conv.is_contained_in(&x.orders[j]) {
                return Err(Error::InvalidDualObject(format!(
                    "condition (iv): converse of relation {i} not inside relation {j}"
                )));
            }
        }
    }
    Ok(())
}
