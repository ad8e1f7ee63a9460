//! Reidemeister–Schreier presentations of finite-index subgroups and a
//! conservative Tietze simplifier.

use crate::coset_enum::{CosetTable, UNDEFINED};
use crate::presentations::{Letter, Presentation, Word};

/// Default bound on the length of relators used to eliminate generators.
pub const DEFAULT_TIETZE_EFFORT: usize = 24;

/// Schreier transversal and nontrivial Schreier generators of a table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchreierData {
    /// `transversal[c]` carries coset 0 to coset `c`; coset 0 has the empty word.
    pub transversal: Vec<Word>,
    /// Freely reduced words, ordered by (coset, generator).
    pub subgroup_generators: Vec<Word>,
    /// `(coset, generator)` for each entry of `subgroup_generators`.
    pub edges: Vec<(usize, usize)>,
}

/// A subgroup presentation together with the parent words of its
/// generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rewritten {
    pub presentation: Presentation,
    pub generator_words: Vec<Word>,
    /// Relator count before empty relators were dropped.
    pub raw_relator_count: usize,
}

/// Transversal from first-appearance definitions of the table, scanned in
/// row-major order after standardizing.
fn transversal(t: &CosetTable) -> (Vec<Word>, Vec<Option<(usize, usize)>>) {
    let n = t.n_cosets();
    let mut words: Vec<Option<Word>> = vec![None; n];
    let mut tree_edge: Vec<Option<(usize, usize)>> = vec![None; n];
    words[0] = Some(Word::empty());
    let mut order = vec![0];
    let mut i = 0;
    while i < order.len() {
        let c = order[i];
        for col in 0..t.width() {
            let d = t.entry(c, col);
            if words[d].is_none() {
                let mut w = words[c].clone().unwrap();
                w.push(Letter::from_column(col));
                words[d] = Some(w);
                tree_edge[d] = Some((c, col));
                order.push(d);
            }
        }
        i += 1;
    }
    (words.into_iter().map(|w| w.expect("transitive table")).collect(), tree_edge)
}

/// Index of the Schreier generator for entry `(coset, generator)`, or
/// `UNDEFINED` for tree edges.
fn generator_numbering(t: &CosetTable, tree_edge: &[Option<(usize, usize)>]) -> (Vec<u32>, Vec<(usize, usize)>) {
    let k = t.n_generators();
    let mut is_tree = vec![false; t.n_cosets() * k];
    for (d, e) in tree_edge.iter().enumerate() {
        if let Some((c, col)) = *e {
            // Edge c --col--> d; as a positive-generator edge it starts at
            // c for even columns and at d for inverse columns.
            let (from, g) = if col % 2 == 0 { (c, col / 2) } else { (d, col / 2) };
            is_tree[from * k + g] = true;
        }
    }
    let mut number = vec![UNDEFINED; t.n_cosets() * k];
    let mut edges = Vec::new();
    for c in 0..t.n_cosets() {
        for g in 0..k {
            if !is_tree[c * k + g] {
                number[c * k + g] = edges.len() as u32;
                edges.push((c, g));
            }
        }
    }
    (number, edges)
}

pub fn schreier_data(t: &CosetTable) -> SchreierData {
    let (transversal, tree_edge) = transversal(t);
    let (_, edges) = generator_numbering(t, &tree_edge);
    let subgroup_generators = edges
        .iter()
        .map(|&(c, g)| {
            let d = t.entry(c, 2 * g);
            transversal[c]
                .concat(&Word::generator(g))
                .concat(&transversal[d].inverse())
                .free_reduce()
        })
        .collect();
    SchreierData {
        transversal,
        subgroup_generators,
        edges,
    }
}

/// Nontrivial Schreier generators of the coset-0 stabilizer.
pub fn schreier_generators(t: &CosetTable) -> Vec<Word> {
    schreier_data(t).subgroup_generators
}

/// Reidemeister–Schreier rewriting, keeping the parent words of the new
/// generators.
pub fn reidemeister_schreier_full(p: &Presentation, t: &CosetTable) -> Rewritten {
    let k = p.n_generators();
    let data = schreier_data(t);
    let (_, tree_edge) = transversal(t);
    let (number, edges) = generator_numbering(t, &tree_edge);
    debug_assert_eq!(edges, data.edges);
    let mut relators = Vec::with_capacity(t.n_cosets() * p.relators().len());
    for c in 0..t.n_cosets() {
        for r in p.relators() {
            let mut out = Word::empty();
            let mut e = c;
            for &l in r.letters() {
                let g = l.generator();
                if l.is_inverse() {
                    let f = t.act(e, l);
                    let s = number[f * k + g];
                    if s != UNDEFINED {
                        out.push(Letter::new(s as usize, true));
                    }
                    e = f;
                } else {
                    let s = number[e * k + g];
                    if s != UNDEFINED {
                        out.push(Letter::new(s as usize, false));
                    }
                    e = t.act(e, l);
                }
            }
            debug_assert_eq!(e, c);
            relators.push(out);
        }
    }
    let raw_relator_count = relators.len();
    let presentation = Presentation::with_numbered_generators("y", edges.len(), relators)
        .expect("generator indices in range");
    Rewritten {
        presentation,
        generator_words: data.subgroup_generators,
        raw_relator_count,
    }
}

/// Presentation of the coset-0 stabilizer on its Schreier generators.
pub fn reidemeister_schreier(p: &Presentation, t: &CosetTable) -> Presentation {
    reidemeister_schreier_full(p, t).presentation
}

/// Substitutes `replacement` for every occurrence of generator `g`.
fn substitute(w: &Word, g: usize, replacement: &Word) -> Word {
    let inv = replacement.inverse();
    let mut out = Word::empty();
    for &l in w.letters() {
        if l.generator() == g {
            let r = if l.is_inverse() { &inv } else { replacement };
            for &m in r.letters() {
                out.push(m);
            }
        } else {
            out.push(l);
        }
    }
    out
}

fn renumber_without(w: &Word, g: usize) -> Word {
    w.letters()
        .iter()
        .map(|&l| {
            let h = l.generator();
            debug_assert_ne!(h, g);
            Letter::new(if h > g { h - 1 } else { h }, l.is_inverse())
        })
        .collect()
}

/// Removes duplicate relators up to cyclic permutation and inversion.
fn dedupe(relators: Vec<Word>) -> Vec<Word> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for r in relators {
        let key = canonical_cyclic(&r);
        if seen.insert(key) {
            out.push(r);
        }
    }
    out
}

fn canonical_cyclic(r: &Word) -> Vec<u32> {
    let mut best: Option<Vec<u32>> = None;
    for w in [r.clone(), r.inverse()] {
        let cols: Vec<u32> = w.letters().iter().map(|l| l.column() as u32).collect();
        for k in 0..cols.len().max(1) {
            let rot: Vec<u32> = cols[k..].iter().chain(&cols[..k]).copied().collect();
            if best.as_ref().map_or(true, |b| rot < *b) {
                best = Some(rot);
            }
        }
    }
    best.unwrap_or_default()
}

/// Tietze simplification: repeatedly eliminates a generator occurring
/// exactly once in some relator of length at most `effort` (shortest such
/// relator first), after free and cyclic reduction and removal of trivial
/// and duplicate relators.
pub fn tietze_simplify(p: &Presentation, effort: usize) -> Presentation {
    let mut names: Vec<String> = p.generators().to_vec();
    let mut relators: Vec<Word> = p.relators().to_vec();
    loop {
        relators = dedupe(
            relators
                .iter()
                .map(Word::cyclic_reduce)
                .filter(|r| !r.is_empty())
                .collect(),
        );
        let mut best: Option<(usize, usize, usize)> = None;
        for (i, r) in relators.iter().enumerate() {
            if r.len() > effort {
                continue;
            }
            if best.is_some_and(|(len, _, _)| r.len() >= len) {
                continue;
            }
            let mut counts = vec![0usize; names.len()];
            for l in r.letters() {
                counts[l.generator()] += 1;
            }
            if let Some(g) = (0..names.len()).find(|&g| counts[g] == 1) {
                best = Some((r.len(), i, g));
            }
        }
        let Some((_, i, g)) = best else {
            break;
        };
        let r = relators.remove(i);
        let pos = r.letters().iter().position(|l| l.generator() == g).unwrap();
        let rot = r.rotate(pos);
        let rest = Word::from_letters(rot.letters()[1..].to_vec());
        // rot = g^e * rest = 1, so g = rest^-1 when e = 1 and g = rest otherwise.
        let replacement = if rot.letters()[0].is_inverse() {
            rest
        } else {
            rest.inverse()
        };
        relators = relators
            .iter()
            .map(|w| renumber_without(&substitute(w, g, &replacement).free_reduce(), g))
            .collect();
        names.remove(g);
    }
    Presentation::new(names, relators).expect("valid after simplification")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coset_enum::{enumerate, EnumerationLimits};
    use crate::intlinalg::abelian_invariants;
    use crate::low_index::low_index_subgroups;
    use crate::presentations::{catalog, parse_presentation, CatalogKey};

    #[test]
    fn subgroup_of_z() {
        let p = parse_presentation("group<a | >").unwrap();
        let t = enumerate(&p, &[Word::generator(0).pow(2)], EnumerationLimits::default()).unwrap();
        assert_eq!(t.n_cosets(), 2);
        let h = reidemeister_schreier(&p, &t);
        assert_eq!(abelian_invariants(&h).to_string(), "[ 0 ]");
    }

    #[test]
    fn gamma_index_three() {
        let p = catalog(CatalogKey::Gamma);
        let r = low_index_subgroups(p, 3, 3).unwrap();
        let h = reidemeister_schreier(p, &r[0].representative);
        assert_eq!(abelian_invariants(&h).to_string(), "[ 2, 2 ]");
    }

    #[test]
    fn schreier_generators_fix_base() {
        let p = catalog(CatalogKey::Gamma);
        for rec in low_index_subgroups(p, 1, 8).unwrap() {
            let t = &rec.representative;
            let data = schreier_data(t);
            let k = p.n_generators();
            assert_eq!(data.subgroup_generators.len(), t.n_cosets() * (k - 1) + 1);
            for w in &data.subgroup_generators {
                assert_eq!(t.trace(0, w), 0);
            }
            for (c, w) in data.transversal.iter().enumerate() {
                assert_eq!(t.trace(0, w), c);
            }
        }
    }

    #[test]
    fn euler_characteristic_scales() {
        for key in [CatalogKey::Gamma, CatalogKey::GammaW, CatalogKey::Lambda1] {
            let p = catalog(key);
            let chi = 1 - p.n_generators() as i64 + p.relators().len() as i64;
            for rec in low_index_subgroups(p, 2, 6).unwrap() {
                let rw = reidemeister_schreier_full(p, &rec.representative);
                let n = rec.index as i64;
                let sub = 1 - rw.presentation.n_generators() as i64 + rw.raw_relator_count as i64;
                assert_eq!(sub, n * chi);
                assert_eq!(rw.raw_relator_count, rec.index * p.relators().len());
            }
        }
    }

    #[test]
    fn tietze_eliminates_and_preserves_invariants() {
        let p = parse_presentation("group<a,b | b*a^-1, a^5>").unwrap();
        let q = tietze_simplify(&p, DEFAULT_TIETZE_EFFORT);
        assert_eq!(q.n_generators(), 1);
        assert_eq!(abelian_invariants(&q), abelian_invariants(&p));

        let g = catalog(CatalogKey::Gamma);
        let whole = low_index_subgroups(g, 1, 1).unwrap();
        let h = reidemeister_schreier(g, &whole[0].representative);
        let s = tietze_simplify(&h, DEFAULT_TIETZE_EFFORT);
        assert_eq!(abelian_invariants(&s), abelian_invariants(g));
        assert!(s.n_generators() <= h.n_generators());
    }

    #[test]
    fn tietze_on_gamma_s() {
        let g = catalog(CatalogKey::Gamma);
        let classes = low_index_subgroups(g, 12, 12).unwrap();
        let gs = classes
            .iter()
            .find(|r| r.abelian_invariants(g).to_string() == "[ 5, 0 ]")
            .expect("class with invariants [ 5, 0 ]");
        let h = reidemeister_schreier(g, &gs.representative);
        assert_eq!(h.n_generators(), 25);
        let s = tietze_simplify(&h, DEFAULT_TIETZE_EFFORT);
        assert!(s.n_generators() <= 25);
        assert_eq!(abelian_invariants(&s).to_string(), "[ 5, 0 ]");
        assert_eq!(low_index_subgroups(&s, 5, 5).unwrap().len(), 8);
    }
}
