//! Verification suites over the finite instances, shared by the command
//! line and the test suite.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{congruence_lattice, homs, product, quotient, FiniteAlgebra};
use crate::duality::{
    alter_ego, check_duality, check_quasi_dual_object, check_quasivariety_duality, dualize, expected_maximal_relations,
    free_algebra_size, free_algebra_size_by_maps, maximal_relations, optimality_witness, priestley_reconstruction,
    quasi_alter_ego, separation_check, Dropped, Polarity,
};
use crate::error::Result;
use crate::kn::build_kn;
use crate::lattice::{find_lattice_isomorphism, up_set_lattice};
use crate::product::{build_product, check_transport, phi_n, product_representation, truth_order_lex_check, DefaultSequence};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Algebra,
    Duality,
    Priestley,
    Product,
    Quasivariety,
    All,
}

impl Suite {
    pub fn parse(s: &str) -> Option<Suite> {
        Some(match s {
            "algebra" => Suite::Algebra,
            "duality" => Suite::Duality,
            "priestley" => Suite::Priestley,
            "product" => Suite::Product,
            "quasivariety" => Suite::Quasivariety,
            "all" => Suite::All,
            _ => return None,
        })
    }

    fn includes(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }
}

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

fn timed(name: &str, f: impl FnOnce() -> Result<(bool, String)>) -> CheckResult {
    let start = Instant::now();
    let (passed, detail) = match f() {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    CheckResult { name: name.to_string(), passed, detail, elapsed: start.elapsed() }
}

/// Subalgebras of K_i × K_j as algebras, in enumeration order.
pub fn pair_subalgebras(i: usize, j: usize) -> Result<Vec<FiniteAlgebra>> {
    let (ki, kj) = (build_kn(i), build_kn(j));
    let prod = product(&[ki.algebra(), kj.algebra()], usize::MAX)?;
    prod.all_subalgebras().iter().map(|s| Ok(prod.subalgebra(s)?.0)).collect()
}

/// The subalgebras of K_i × K_j for i, j ≤ n.
pub fn duality_test_algebras(n: usize) -> Result<Vec<FiniteAlgebra>> {
    let mut out = Vec::new();
    for i in 0..=n {
        for j in 0..=n {
            out.extend(pair_subalgebras(i, j)?);
        }
    }
    Ok(out)
}

/// Every proper nontrivial quotient, one per congruence.
pub fn proper_quotients(a: &FiniteAlgebra) -> Result<Vec<FiniteAlgebra>> {
    let cons = congruence_lattice(a);
    cons.iter()
        .filter(|c| c.num_blocks() > 1 && c.num_blocks() < a.size())
        .map(|c| quotient(a, c))
        .collect()
}

/// Subalgebras of K_0 × K_1 × K_2 generated by one to three random
/// elements, deduplicated, from a fixed seed.
pub fn random_subalgebras(count: usize, seed: u64) -> Result<Vec<FiniteAlgebra>> {
    let ks: Vec<_> = (0..3).map(build_kn).collect();
    let prod = product(&[ks[0].algebra(), ks[1].algebra(), ks[2].algebra()], usize::MAX)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = Vec::new();
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < count && attempts < 100 * count {
        attempts += 1;
        let k = rng.gen_range(1..=3);
        let gens: Vec<usize> = (0..k).map(|_| rng.gen_range(0..prod.size())).collect();
        let set = prod.generate(&gens);
        if seen.contains(&set) {
            continue;
        }
        out.push(prod.subalgebra(&set)?.0);
        seen.push(set);
    }
    Ok(out)
}

/// Whether the up-set lattice of the reconstructed Priestley space of the
/// dual is isomorphic to the knowledge reduct.
pub fn reconstruction_matches(a: &FiniteAlgebra, n: usize) -> Result<bool> {
    let ego = alter_ego(n);
    let dual = dualize(a, &ego)?;
    let y = priestley_reconstruction(&dual.space)?;
    let k = up_set_lattice(&y.poset).lattice;
    Ok(find_lattice_isomorphism(&k, &a.knowledge_lattice()?).is_some())
}

pub fn run(suite: Suite, max_n: usize, seed: u64, limit: usize) -> Vec<CheckResult> {
    let mut out = Vec::new();
    if suite.includes(Suite::Algebra) {
        out.push(timed("subalgebras of K_n^2", || {
            let mut sizes = Vec::new();
            for n in 0..=max_n.min(2) {
                sizes.push(pair_subalgebras(n, n)?.len());
            }
            let ok = sizes.iter().enumerate().all(|(n, &c)| c == 3 * n + 4);
            Ok((ok, format!("{sizes:?}")))
        }));
        out.push(timed("relation count formula", || {
            let mut ok = true;
            let mut counts = Vec::new();
            for n in 1..=max_n.min(2) {
                let mut total = 0;
                for i in 0..=n {
                    for j in 0..=n {
                        total += pair_subalgebras(i, j)?.len();
                    }
                }
                ok &= total == (n + 1) * (2 * n * n + 9 * n + 8) / 2;
                counts.push(total);
            }
            Ok((ok, format!("{counts:?}")))
        }));
        out.push(timed("congruence chains", || {
            let mut ok = true;
            for n in 0..=max_n {
                let k = build_kn(n);
                let cons = congruence_lattice(k.algebra());
                ok &= cons.len() == n + 2 && cons.windows(2).all(|w| w[0].is_finer(&w[1]));
            }
            Ok((ok, String::new()))
        }));
        out.push(timed("hom census", || {
            let mut ok = true;
            for i in 0..=max_n {
                for j in 0..=max_n {
                    let c = homs(build_kn(i).algebra(), build_kn(j).algebra()).len();
                    ok &= c == usize::from(j <= i);
                }
            }
            Ok((ok, String::new()))
        }));
    }
    if suite.includes(Suite::Duality) {
        out.push(timed("separation", || {
            let mut total = 0;
            for n in 0..=max_n {
                total += separation_check(n)?.len();
            }
            Ok((true, format!("{total} pairs separated")))
        }));
        out.push(timed("maximal relations", || {
            let mut ok = true;
            for j in 0..=max_n.min(2) {
                for m in 0..=max_n.min(2) {
                    for pj in Polarity::BOTH {
                        for pm in Polarity::BOTH {
                            ok &= maximal_relations(j, pj, m, pm)? == expected_maximal_relations(j, pj, m, pm)?;
                        }
                    }
                }
            }
            Ok((ok, String::new()))
        }));
        out.push(timed("duality on products of two", || {
            let n = max_n.min(1);
            let ego = alter_ego(n);
            let mut count = 0;
            for a in duality_test_algebras(n)? {
                for b in std::iter::once(a.clone()).chain(proper_quotients(&a)?) {
                    if !check_duality(&b, &ego, limit)?.is_isomorphism {
                        return Ok((false, format!("failed on an algebra of size {}", b.size())));
                    }
                    count += 1;
                }
            }
            Ok((true, format!("{count} algebras")))
        }));
        if max_n >= 2 {
            out.push(timed("duality on random subalgebras", || {
                let ego = alter_ego(2);
                let algs = random_subalgebras(20, seed)?;
                for a in &algs {
                    if !check_duality(a, &ego, limit)?.is_isomorphism {
                        return Ok((false, format!("failed on an algebra of size {}", a.size())));
                    }
                }
                Ok((algs.len() >= 20, format!("{} algebras", algs.len())))
            }));
        }
        out.push(timed("optimality", || {
            let mut ok = true;
            for n in 1..=max_n.min(2) {
                for m in 0..=n {
                    ok &= optimality_witness(n, Dropped::Relation(m))?.explicit_found;
                    if m >= 1 {
                        ok &= optimality_witness(n, Dropped::Link(m))?.explicit_found;
                    }
                }
            }
            Ok((ok, String::new()))
        }));
    }
    if suite.includes(Suite::Priestley) {
        out.push(timed("free algebra counts", || {
            let zero = (free_algebra_size(0, 1)?, free_algebra_size_by_maps(0, 1)?);
            let mut ok = zero == (36, 36);
            let mut detail = format!("{}", zero.0);
            if max_n >= 1 {
                let one = free_algebra_size(1, 1)?;
                ok &= one == 5879;
                detail.push_str(&format!(", {one}"));
            }
            Ok((ok, detail))
        }));
        out.push(timed("reconstruction", || {
            let n = max_n.min(1);
            for a in duality_test_algebras(n)? {
                if !reconstruction_matches(&a, n)? {
                    return Ok((false, format!("failed on an algebra of size {}", a.size())));
                }
            }
            Ok((true, String::new()))
        }));
    }
    if suite.includes(Suite::Product) {
        out.push(timed("all-2 products", || {
            let mut ok = true;
            for n in 0..=max_n.max(1) {
                let p = build_product(&DefaultSequence::all_two(n), limit)?;
                ok &= p.size() == 3 * n + 4 && check_transport(&p, limit)?.passed() && truth_order_lex_check(n)?;
                let k = build_kn(n);
                let r = product_representation(k.algebra(), n, limit)?;
                ok &= r.is_isomorphism && (0..k.size()).all(|c| phi_n(&r.product.universe[r.iso[c]]) == k.elem(c));
            }
            Ok((ok, String::new()))
        }));
        out.push(timed("product representation", || {
            let n = max_n.min(1);
            for a in duality_test_algebras(n)? {
                let r = product_representation(&a, n, limit)?;
                if !r.is_isomorphism || !check_transport(&r.product, limit)?.passed() {
                    return Ok((false, format!("failed on an algebra of size {}", a.size())));
                }
            }
            Ok((true, String::new()))
        }));
    }
    if suite.includes(Suite::Quasivariety) {
        out.push(timed("quasivariety duality", || {
            let mut ok = true;
            for n in 1..=max_n.clamp(1, 2) {
                check_quasi_dual_object(&quasi_alter_ego(n))?;
                for a in pair_subalgebras(n, n)? {
                    ok &= check_quasivariety_duality(&a, n)?;
                }
            }
            Ok((ok, String::new()))
        }));
    }
    out
}
