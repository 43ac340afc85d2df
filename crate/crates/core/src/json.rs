//! JSON formats for posets, lattices, algebras, multisorted dual objects and
//! default sequences. Binary operation tables are written as rows.

use serde::{Deserialize, Serialize};

use crate::algebra::{BinOp, FiniteAlgebra};
use crate::duality::MultisortedSpace;
use crate::error::{Error, Result};
use crate::lattice::DistLattice;
use crate::poset::Poset;
use crate::product::DefaultSequence;

/// `{"size": n, "leq": [[a, b], ...]}`; the pairs are closed reflexively
/// and transitively on load. Written out as Hasse covers.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PosetJson {
    pub size: usize,
    #[serde(default)]
    pub leq: Vec<[usize; 2]>,
}

impl From<&Poset> for PosetJson {
    fn from(p: &Poset) -> Self {
        PosetJson { size: p.size(), leq: p.hasse_edges().into_iter().map(|(a, b)| [a, b]).collect() }
    }
}

impl PosetJson {
    pub fn build(&self) -> Result<Poset> {
        for &[a, b] in &self.leq {
            for x in [a, b] {
                if x >= self.size {
                    return Err(Error::IndexOutOfRange { index: x, size: self.size });
                }
            }
        }
        Poset::from_pairs(self.size, self.leq.iter().map(|&[a, b]| (a, b)))
    }
}

/// Either explicit tables or the order of a poset that must be a
/// distributive lattice.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum LatticeJson {
    FromPoset { from_poset: PosetJson },
    Tables { size: usize, meet: Vec<Vec<usize>>, join: Vec<Vec<usize>>, bot: usize, top: usize },
}

fn rows(flat: &[usize], n: usize) -> Vec<Vec<usize>> {
    flat.chunks(n.max(1)).map(<[usize]>::to_vec).collect()
}

fn flatten(rows: &[Vec<usize>], n: usize) -> Result<Vec<usize>> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::LengthMismatch { expected: n * n, found: rows.iter().map(Vec::len).sum() });
    }
    Ok(rows.concat())
}

impl From<&DistLattice> for LatticeJson {
    fn from(l: &DistLattice) -> Self {
        let n = l.size();
        LatticeJson::Tables { size: n, meet: rows(l.meet_table(), n), join: rows(l.join_table(), n), bot: l.bot(), top: l.top() }
    }
}

impl LatticeJson {
    pub fn build(&self) -> Result<DistLattice> {
        match self {
            LatticeJson::FromPoset { from_poset } => DistLattice::from_order(&from_poset.build()?),
            LatticeJson::Tables { size, meet, join, bot, top } => {
                DistLattice::new(*size, flatten(meet, *size)?, flatten(join, *size)?, *bot, *top)
            }
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct OpsJson {
    pub kmeet: Vec<Vec<usize>>,
    pub kjoin: Vec<Vec<usize>>,
    pub tmeet: Vec<Vec<usize>>,
    pub tjoin: Vec<Vec<usize>>,
    pub neg: Vec<usize>,
    pub bot: usize,
    pub top: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct AlgebraJson {
    pub size: usize,
    pub ops: OpsJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
}

impl From<&FiniteAlgebra> for AlgebraJson {
    fn from(a: &FiniteAlgebra) -> Self {
        let n = a.size();
        let t = |op: BinOp| rows(a.table(op), n);
        AlgebraJson {
            size: n,
            ops: OpsJson {
                kmeet: t(BinOp::KMeet),
                kjoin: t(BinOp::KJoin),
                tmeet: t(BinOp::TMeet),
                tjoin: t(BinOp::TJoin),
                neg: a.neg_table().to_vec(),
                bot: a.bot(),
                top: a.top(),
            },
            names: a.names().map(<[String]>::to_vec),
        }
    }
}

impl AlgebraJson {
    pub fn build(&self) -> Result<FiniteAlgebra> {
        let n = self.size;
        let o = &self.ops;
        let tables = [&o.kmeet, &o.kjoin, &o.tmeet, &o.tjoin];
        let flat: Vec<Vec<usize>> = tables.iter().map(|r| flatten(r, n)).collect::<Result<_>>()?;
        let tables: [Vec<usize>; 4] = flat.try_into().expect("four tables");
        FiniteAlgebra::new(n, tables, o.neg.clone(), o.bot, o.top, self.names.clone())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct MultisortedJson {
    pub sorts: Vec<PosetJson>,
    #[serde(default)]
    pub links: Vec<Vec<usize>>,
}

impl From<&MultisortedSpace> for MultisortedJson {
    fn from(x: &MultisortedSpace) -> Self {
        MultisortedJson { sorts: x.sorts.iter().map(PosetJson::from).collect(), links: x.links.clone() }
    }
}

impl MultisortedJson {
    pub fn build(&self) -> Result<MultisortedSpace> {
        let sorts = self.sorts.iter().map(PosetJson::build).collect::<Result<_>>()?;
        MultisortedSpace::new(sorts, self.links.clone())
    }
}

/// Complement witnesses are recomputed on load.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SequenceJson {
    pub lattices: Vec<LatticeJson>,
    #[serde(default)]
    pub homs: Vec<Vec<usize>>,
}

impl From<&DefaultSequence> for SequenceJson {
    fn from(s: &DefaultSequence) -> Self {
        SequenceJson { lattices: s.lattices().iter().map(LatticeJson::from).collect(), homs: s.hom_tables() }
    }
}

impl SequenceJson {
    pub fn build(&self) -> Result<DefaultSequence> {
        let lattices = self.lattices.iter().map(LatticeJson::build).collect::<Result<_>>()?;
        DefaultSequence::new(lattices, self.homs.clone())
    }
}

pub fn algebra_from_str(s: &str) -> Result<FiniteAlgebra> {
    serde_json::from_str::<AlgebraJson>(s)?.build()
}

pub fn algebra_to_string(a: &FiniteAlgebra) -> String {
    serde_json::to_string_pretty(&AlgebraJson::from(a)).expect("serialisable")
}

pub fn poset_from_str(s: &str) -> Result<Poset> {
    serde_json::from_str::<PosetJson>(s)?.build()
}

pub fn poset_to_string(p: &Poset) -> String {
    serde_json::to_string_pretty(&PosetJson::from(p)).expect("serialisable")
}

pub fn lattice_from_str(s: &str) -> Result<DistLattice> {
    serde_json::from_str::<LatticeJson>(s)?.build()
}

pub fn lattice_to_string(l: &DistLattice) -> String {
    serde_json::to_string_pretty(&LatticeJson::from(l)).expect("serialisable")
}

pub fn space_from_str(s: &str) -> Result<MultisortedSpace> {
    serde_json::from_str::<MultisortedJson>(s)?.build()
}

pub fn space_to_string(x: &MultisortedSpace) -> String {
    serde_json::to_string_pretty(&MultisortedJson::from(x)).expect("serialisable")
}

pub fn sequence_from_str(s: &str) -> Result<DefaultSequence> {
    serde_json::from_str::<SequenceJson>(s)?.build()
}

pub fn sequence_to_string(s: &DefaultSequence) -> String {
    serde_json::to_string_pretty(&SequenceJson::from(s)).expect("serialisable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kn::build_kn;

    #[test]
    fn algebra_round_trip() {
        let k = build_kn(1).into_algebra();
        assert_eq!(algebra_from_str(&algebra_to_string(&k)).unwrap(), k);
    }

    #[test]
    fn lattice_from_poset() {
        let l = lattice_from_str(r#"{"from_poset": {"size": 3, "leq": [[0, 1], [1, 2]]}}"#).unwrap();
        assert_eq!(l.size(), 3);
        assert_eq!(l.top(), 2);
    }

    #[test]
    fn space_round_trip() {
        let x = crate::duality::alter_ego(1).space();
        assert_eq!(space_from_str(&space_to_string(&x)).unwrap(), x);
    }

    #[test]
    fn sequence_round_trip() {
        let s = DefaultSequence::all_two(2);
        let back = sequence_from_str(&sequence_to_string(&s)).unwrap();
        assert_eq!(back.hom_tables(), s.hom_tables());
    }

    #[test]
    fn bad_index_is_rejected() {
        assert!(poset_from_str(r#"{"size": 2, "leq": [[0, 5]]}"#).is_err());
    }
}
