//! Multivariate division and Buchberger's algorithm over a field, with
//! optional cofactor tracking back to the input generators.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

use serde::{Deserialize, Serialize};

use super::domain::{DomainTag, Field};
use super::monomial::{Monomial, MonomialOrder};
use super::polynomial::{PolyRing, Polynomial};

/// Resource caps for a single basis computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Budget {
    pub max_pairs: usize,
    pub max_degree: u32,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_pairs: 50_000,
            max_degree: 30,
        }
    }
}

/// A generating set, possibly a reduced Gröbner basis, with optional
/// cofactors: `cofactors[k][j]` multiplies input generator `j` in the
/// expression of `generators[k]`.
#[derive(Debug, Clone)]
pub struct IdealBasis<E> {
    pub generators: Vec<Polynomial<E>>,
    pub domain: DomainTag,
    pub order: MonomialOrder,
    pub groebner: bool,
    pub cofactors: Option<Vec<Vec<Polynomial<E>>>>,
    /// S-pairs actually reduced while building the basis.
    pub pairs_reduced: usize,
}

impl<E> IdealBasis<E> {
    pub fn is_unit_ideal(&self) -> bool {
        self.generators.len() == 1 && self.generators[0].is_constant()
    }
}

/// A run that hit a cap; the partial basis still generates the ideal.
#[derive(Debug, Clone)]
pub struct BudgetExceeded<E> {
    pub reason: String,
    pub partial: Vec<Polynomial<E>>,
    pub pairs_reduced: usize,
}

impl<E> From<BudgetExceeded<E>> for crate::error::Error {
    fn from(b: BudgetExceeded<E>) -> Self {
        crate::error::Error::Budget(b.reason)
    }
}

pub struct Division<E> {
    pub remainder: Polynomial<E>,
    pub quotients: Vec<Polynomial<E>>,
}

/// Full reduction of `f` by `divisors` (first divisible leading monomial
/// wins); `f = Σ quotients[i]·divisors[i] + remainder`.
pub fn divide<F: Field>(
    ring: &PolyRing<F>,
    f: &Polynomial<F::Elem>,
    divisors: &[Polynomial<F::Elem>],
) -> Division<F::Elem> {
    reduce(ring, f, divisors, true)
}

pub fn normal_form<F: Field>(
    ring: &PolyRing<F>,
    f: &Polynomial<F::Elem>,
    divisors: &[Polynomial<F::Elem>],
) -> Polynomial<F::Elem> {
    reduce(ring, f, divisors, false).remainder
}

fn reduce<F: Field>(
    ring: &PolyRing<F>,
    f: &Polynomial<F::Elem>,
    divisors: &[Polynomial<F::Elem>],
    track: bool,
) -> Division<F::Elem> {
    let d = ring.domain();
    let leads: Vec<Option<(Monomial, F::Elem)>> = divisors
        .iter()
        .map(|g| g.leading().map(|(m, c)| (*m, d.inv(c))))
        .collect();
    let mut quotients = if track {
        vec![ring.zero(); divisors.len()]
    } else {
        Vec::new()
    };
    let mut p = f.clone();
    let mut rem: Vec<(Monomial, F::Elem)> = Vec::new();
    while let Some((m, c)) = p.leading().cloned() {
        let hit = leads.iter().enumerate().find_map(|(i, l)| match l {
            Some((lm, inv)) if lm.divides(&m) => Some((i, lm.quotient_of(&m), d.mul(&c, inv))),
            _ => None,
        });
        match hit {
            Some((i, q, coef)) => {
                p = ring.combine(&p, &d.neg(&coef), &q, &divisors[i]);
                if track {
                    quotients[i] = ring.combine(&quotients[i], &coef, &q, &ring.one());
                }
            }
            None => {
                rem.push((m, c));
                p.terms.remove(0);
            }
        }
    }
    Division {
        remainder: Polynomial { terms: rem },
        quotients,
    }
}

pub fn s_polynomial<F: Field>(
    ring: &PolyRing<F>,
    f: &Polynomial<F::Elem>,
    g: &Polynomial<F::Elem>,
) -> Polynomial<F::Elem> {
    let d = ring.domain();
    let (fm, fc) = f.leading().expect("nonzero");
    let (gm, gc) = g.leading().expect("nonzero");
    let l = fm.lcm(gm);
    let left = ring.mul_term(f, &fm.quotient_of(&l), &d.inv(fc));
    ring.combine(&left, &d.neg(&d.inv(gc)), &gm.quotient_of(&l), g)
}

/// Working element of a basis under construction.
struct Element<E> {
    poly: Polynomial<E>,
    cof: Option<Vec<Polynomial<E>>>,
}

struct Builder<'a, F: Field> {
    ring: &'a PolyRing<F>,
    ngens: usize,
    track: bool,
}

impl<F: Field> Builder<'_, F> {
    fn monic(&self, e: Element<F::Elem>) -> Element<F::Elem> {
        let d = self.ring.domain();
        let inv = d.inv(&e.poly.leading().expect("nonzero").1);
        Element {
            poly: self.ring.scale(&e.poly, &inv),
            cof: e
                .cof
                .map(|cs| cs.iter().map(|c| self.ring.scale(c, &inv)).collect()),
        }
    }

    /// `Σ coef_k · m_k · cof(elements[k])`.
    fn combine_cofactors(&self, parts: &[CofactorTerm<'_, F::Elem>]) -> Vec<Polynomial<F::Elem>> {
        let mut out = vec![self.ring.zero(); self.ngens];
        for (c, m, cof) in parts {
            for (j, slot) in out.iter_mut().enumerate() {
                *slot = self.ring.combine(slot, c, m, &cof[j]);
            }
        }
        out
    }
}

/// `coef · monomial · cofactors` summand of a combined cofactor vector.
type CofactorTerm<'a, E> = (E, Monomial, &'a Vec<Polynomial<E>>);

/// Reduced rows with their coefficient vectors over the input generators.
pub type TrackedRows<E> = (Vec<Polynomial<E>>, Vec<Vec<E>>);

type TrackedRow<E> = (Polynomial<E>, Vec<E>);

/// Row-reduces the generators as vectors over their monomials. The span,
/// hence the ideal, is unchanged; the result has distinct leading monomials.
pub fn linear_interreduce<F: Field>(
    ring: &PolyRing<F>,
    gens: &[Polynomial<F::Elem>],
) -> Vec<Polynomial<F::Elem>> {
    linear_interreduce_tracked(ring, gens).0
}

/// As [`linear_interreduce`], also returning `t` with
/// `rows[k] = Σ_j t[k][j]·gens[j]`.
pub fn linear_interreduce_tracked<F: Field>(
    ring: &PolyRing<F>,
    gens: &[Polynomial<F::Elem>],
) -> TrackedRows<F::Elem> {
    let d = ring.domain();
    let mut rows: Vec<TrackedRow<F::Elem>> = Vec::new();
    let mut index: std::collections::HashMap<Monomial, usize> = std::collections::HashMap::new();
    for (j, g) in gens.iter().enumerate() {
        let mut p = g.clone();
        let mut t = vec![d.zero(); gens.len()];
        t[j] = d.one();
        // reduce leading terms against existing pivots until a new pivot
        loop {
            let Some((m, c)) = p.leading().cloned() else {
                break;
            };
            match index.get(&m) {
                Some(&k) => {
                    let neg = d.neg(&c);
                    p = ring.combine(&p, &neg, &Monomial::ONE, &rows[k].0);
                    for (tj, rj) in t.iter_mut().zip(&rows[k].1) {
                        *tj = d.add(tj, &d.mul(&neg, rj));
                    }
                }
                None => break,
            }
        }
        if !p.is_zero() {
            let inv = d.inv(&p.leading().expect("nonzero").1);
            index.insert(p.leading_monomial().expect("nonzero"), rows.len());
            let t = t.iter().map(|x| d.mul(x, &inv)).collect();
            rows.push((ring.scale(&p, &inv), t));
        }
    }
    rows.sort_by(|a, b| {
        ring.cmp(
            &b.0.leading_monomial().expect("nonzero"),
            &a.0.leading_monomial().expect("nonzero"),
        )
    });
    rows.into_iter().unzip()
}

/// Reduced Gröbner basis of the ideal generated by `gens`.
///
/// Pairs are taken by lowest lcm degree (normal strategy) and pruned with
/// the coprime-leading-monomial and chain criteria. The run stops early with
/// `{1}` once a nonzero constant appears.
pub fn buchberger<F: Field>(
    ring: &PolyRing<F>,
    gens: &[Polynomial<F::Elem>],
    budget: Budget,
    track_cofactors: bool,
) -> Result<IdealBasis<F::Elem>, BudgetExceeded<F::Elem>> {
    let b = Builder {
        ring,
        ngens: gens.len(),
        track: track_cofactors,
    };
    let d = ring.domain();
    let finish = |elems: Vec<Polynomial<F::Elem>>,
                  cofs: Option<Vec<Vec<Polynomial<F::Elem>>>>,
                  pairs| IdealBasis {
        generators: elems,
        domain: d.tag(),
        order: ring.order(),
        groebner: true,
        cofactors: cofs,
        pairs_reduced: pairs,
    };

    let mut basis: Vec<Element<F::Elem>> = Vec::new();
    for (j, g) in gens.iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        let cof = b.track.then(|| {
            let mut v = vec![ring.zero(); b.ngens];
            v[j] = ring.one();
            v
        });
        basis.push(b.monic(Element {
            poly: g.clone(),
            cof,
        }));
    }
    if basis.is_empty() {
        return Ok(finish(Vec::new(), b.track.then(Vec::new), 0));
    }
    if let Some(k) = basis.iter().position(|e| e.poly.is_constant()) {
        let e = basis.swap_remove(k);
        return Ok(finish(vec![e.poly], e.cof.map(|c| vec![c]), 0));
    }

    let lead = |e: &Element<F::Elem>| e.poly.leading_monomial().expect("nonzero");
    let mut heap: BinaryHeap<Reverse<(u32, usize, usize)>> = BinaryHeap::new();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();
    let push_pairs = |heap: &mut BinaryHeap<Reverse<(u32, usize, usize)>>,
                      pending: &mut HashSet<(usize, usize)>,
                      basis: &[Element<F::Elem>],
                      j: usize| {
        for i in 0..j {
            let l = lead(&basis[i]).lcm(&lead(&basis[j]));
            heap.push(Reverse((l.degree(), j, i)));
            pending.insert((i, j));
        }
    };
    for j in 1..basis.len() {
        push_pairs(&mut heap, &mut pending, &basis, j);
    }

    let mut pairs_reduced = 0usize;
    while let Some(Reverse((_, j, i))) = heap.pop() {
        pending.remove(&(i, j));
        let (li, lj) = (lead(&basis[i]), lead(&basis[j]));
        if li.is_coprime(&lj) {
            continue;
        }
        let l = li.lcm(&lj);
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && lead(&basis[k]).divides(&l)
                && !pending.contains(&(i.min(k), i.max(k)))
                && !pending.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        pairs_reduced += 1;
        if pairs_reduced > budget.max_pairs {
            return Err(BudgetExceeded {
                reason: format!("S-pair cap {} reached", budget.max_pairs),
                partial: basis.into_iter().map(|e| e.poly).collect(),
                pairs_reduced,
            });
        }
        let s = s_polynomial(ring, &basis[i].poly, &basis[j].poly);
        let polys: Vec<Polynomial<F::Elem>> = basis.iter().map(|e| e.poly.clone()).collect();
        let div = reduce(ring, &s, &polys, b.track);
        if div.remainder.is_zero() {
            continue;
        }
        if div.remainder.total_degree() > budget.max_degree {
            return Err(BudgetExceeded {
                reason: format!("degree cap {} exceeded", budget.max_degree),
                partial: polys,
                pairs_reduced,
            });
        }
        let cof = b.track.then(|| {
            // basis elements are monic, so S = (l/li)·g_i − (l/lj)·g_j
            let one = d.one();
            let minus = d.neg(&one);
            let mut parts = vec![
                (
                    one,
                    li.quotient_of(&l),
                    basis[i].cof.as_ref().expect("tracked"),
                ),
                (
                    minus,
                    lj.quotient_of(&l),
                    basis[j].cof.as_ref().expect("tracked"),
                ),
            ];
            let mut out = b.combine_cofactors(&parts);
            parts.clear();
            for (k, q) in div.quotients.iter().enumerate() {
                for (qm, qc) in q.terms() {
                    let qcof = basis[k].cof.as_ref().expect("tracked");
                    for (jj, slot) in out.iter_mut().enumerate() {
                        *slot = ring.combine(slot, &d.neg(qc), qm, &qcof[jj]);
                    }
                }
            }
            out
        });
        let elem = b.monic(Element {
            poly: div.remainder,
            cof,
        });
        if elem.poly.is_constant() {
            return Ok(finish(
                vec![elem.poly],
                elem.cof.map(|c| vec![c]),
                pairs_reduced,
            ));
        }
        basis.push(elem);
        let j = basis.len() - 1;
        push_pairs(&mut heap, &mut pending, &basis, j);
    }

    // minimize: drop elements whose leading monomial another keeps dividing
    let mut keep = vec![true; basis.len()];
    for a in 0..basis.len() {
        let la = lead(&basis[a]);
        keep[a] = !(0..basis.len()).any(|c| {
            c != a && {
                let lc = lead(&basis[c]);
                lc.divides(&la) && (lc != la || c < a)
            }
        });
    }
    let minimal: Vec<Element<F::Elem>> = basis
        .into_iter()
        .zip(keep)
        .filter_map(|(e, k)| k.then_some(e))
        .collect();

    // interreduce against the other minimal elements
    let polys: Vec<Polynomial<F::Elem>> = minimal.iter().map(|e| e.poly.clone()).collect();
    let mut reduced: Vec<Element<F::Elem>> = Vec::with_capacity(minimal.len());
    for (a, e) in minimal.iter().enumerate() {
        let others: Vec<Polynomial<F::Elem>> = polys
            .iter()
            .enumerate()
            .map(|(c, p)| if c == a { ring.zero() } else { p.clone() })
            .collect();
        let div = reduce(ring, &e.poly, &others, b.track);
        let cof = e.cof.as_ref().map(|own| {
            let mut out = own.clone();
            for (k, q) in div.quotients.iter().enumerate() {
                for (qm, qc) in q.terms() {
                    let qcof = minimal[k].cof.as_ref().expect("tracked");
                    for (jj, slot) in out.iter_mut().enumerate() {
                        *slot = ring.combine(slot, &d.neg(qc), qm, &qcof[jj]);
                    }
                }
            }
            out
        });
        reduced.push(Element {
            poly: div.remainder,
            cof,
        });
    }
    reduced.sort_by(|x, y| ring.cmp(&lead(x), &lead(y)));
    let (elems, cofs): (Vec<_>, Vec<_>) = reduced.into_iter().map(|e| (e.poly, e.cof)).unzip();
    let cofs = if b.track {
        Some(cofs.into_iter().map(|c| c.expect("tracked")).collect())
    } else {
        None
    };
    Ok(finish(elems, cofs, pairs_reduced))
}

/// Outcome of a field triviality test.
#[derive(Debug, Clone)]
pub struct FieldTriviality<E> {
    pub trivial: bool,
    pub basis: IdealBasis<E>,
    /// When trivial and tracked: `Σ h_j g_j = 1`.
    pub cofactors_for_one: Option<Vec<Polynomial<E>>>,
}

/// Whether `1` lies in the ideal. The generators are row-reduced first,
/// which is much cheaper for long minor lists; tracked cofactors refer to
/// the original generators.
pub fn is_trivial_over_field<F: Field>(
    ring: &PolyRing<F>,
    gens: &[Polynomial<F::Elem>],
    budget: Budget,
    track_cofactors: bool,
) -> Result<FieldTriviality<F::Elem>, BudgetExceeded<F::Elem>> {
    let (rows, transform) = linear_interreduce_tracked(ring, gens);
    let basis = buchberger(ring, &rows, budget, track_cofactors)?;
    let trivial = basis.is_unit_ideal();
    let cofactors_for_one = match (&basis.cofactors, trivial) {
        (Some(c), true) => {
            // pull the row cofactors back to the original generators
            let d = ring.domain();
            let mut out = vec![ring.zero(); gens.len()];
            for (k, h) in c[0].iter().enumerate() {
                for (j, slot) in out.iter_mut().enumerate() {
                    if !d.is_zero(&transform[k][j]) {
                        *slot = ring.combine(slot, &transform[k][j], &Monomial::ONE, h);
                    }
                }
            }
            Some(out)
        }
        _ => None,
    };
    Ok(FieldTriviality {
        trivial,
        basis,
        cofactors_for_one,
    })
}

/// `Σ cofactors[j]·gens[j]`.
pub fn expand_combination<F: Field>(
    ring: &PolyRing<F>,
    cofactors: &[Polynomial<F::Elem>],
    gens: &[Polynomial<F::Elem>],
) -> Polynomial<F::Elem> {
    cofactors
        .iter()
        .zip(gens)
        .fold(ring.zero(), |acc, (h, g)| ring.add(&acc, &ring.mul(h, g)))
}

/// Every S-polynomial of `basis` reduces to zero against it.
pub fn is_groebner<F: Field>(ring: &PolyRing<F>, basis: &[Polynomial<F::Elem>]) -> bool {
    let polys: Vec<_> = basis.iter().filter(|p| !p.is_zero()).cloned().collect();
    (0..polys.len()).all(|j| {
        (0..j)
            .all(|i| normal_form(ring, &s_polynomial(ring, &polys[i], &polys[j]), &polys).is_zero())
    })
}

/// `f` lies in the ideal whose Gröbner basis is `gb`.
pub fn ideal_contains<F: Field>(
    ring: &PolyRing<F>,
    gb: &[Polynomial<F::Elem>],
    f: &Polynomial<F::Elem>,
) -> bool {
    normal_form(ring, f, gb).is_zero()
}

/// Equality of two ideals by mutual reduction against each other's bases.
pub fn ideals_equal<F: Field>(
    ring: &PolyRing<F>,
    a: &[Polynomial<F::Elem>],
    b: &[Polynomial<F::Elem>],
    budget: Budget,
) -> Result<bool, BudgetExceeded<F::Elem>> {
    let ga = buchberger(ring, a, budget, false)?.generators;
    let gb = buchberger(ring, b, budget, false)?.generators;
    Ok(b.iter().all(|p| ideal_contains(ring, &ga, p))
        && a.iter().all(|p| ideal_contains(ring, &gb, p)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::domain::{PrimeField, Rationals, Ring};

    fn q(n: usize) -> PolyRing<Rationals> {
        PolyRing::new(Rationals, n, MonomialOrder::DegRevLex).unwrap()
    }

    fn parse_all<R: super::super::polynomial::RationalEmbedding>(
        r: &PolyRing<R>,
        texts: &[&str],
    ) -> Vec<Polynomial<R::Elem>> {
        texts.iter().map(|t| r.parse(t).unwrap()).collect()
    }

    #[test]
    fn division_examples() {
        let r = q(2);
        let basis = parse_all(&r, &["x0"]);
        assert!(normal_form(&r, &r.parse("x0^2").unwrap(), &basis).is_zero());
        assert_eq!(
            r.render(&normal_form(&r, &r.parse("x0^2 + 1").unwrap(), &basis)),
            "1"
        );
        assert!(normal_form(&r, &basis[0], &basis).is_zero());
    }

    #[test]
    fn unit_constant_gives_unit_ideal() {
        let r = q(1);
        let gb = buchberger(&r, &parse_all(&r, &["x0", "2"]), Budget::default(), false).unwrap();
        assert!(gb.is_unit_ideal());
        assert_eq!(r.render(&gb.generators[0]), "1");
    }

    #[test]
    fn textbook_reduced_basis() {
        let r = q(2);
        let gb = buchberger(
            &r,
            &parse_all(&r, &["x0*x1", "x0 + x1"]),
            Budget::default(),
            true,
        )
        .unwrap();
        let text: Vec<String> = gb.generators.iter().map(|p| r.render(p)).collect();
        assert_eq!(text, vec!["x0 + x1", "x1^2"]);
        assert!(is_groebner(&r, &gb.generators));
        let gens = parse_all(&r, &["x0*x1", "x0 + x1"]);
        for (k, cof) in gb.cofactors.as_ref().unwrap().iter().enumerate() {
            assert_eq!(expand_combination(&r, cof, &gens), gb.generators[k]);
        }
    }

    #[test]
    fn triviality_with_cofactors() {
        let r = q(1);
        let gens = parse_all(&r, &["x0", "x0 + 1"]);
        let t = is_trivial_over_field(&r, &gens, Budget::default(), true).unwrap();
        assert!(t.trivial);
        let h = t.cofactors_for_one.unwrap();
        assert_eq!(expand_combination(&r, &h, &gens), r.one());
    }

    #[test]
    fn path_three_minor_ideal_is_proper() {
        let r = q(3);
        let gens = parse_all(&r, &["x0*x1*x2 - x0 - x2"]);
        let t = is_trivial_over_field(&r, &gens, Budget::default(), false).unwrap();
        assert!(!t.trivial);
    }

    #[test]
    fn five_is_not_a_unit_mod_five() {
        let f = PolyRing::new(PrimeField::new(5).unwrap(), 1, MonomialOrder::DegRevLex).unwrap();
        let gens = parse_all(&f, &["5", "x0"]);
        let t = is_trivial_over_field(&f, &gens, Budget::default(), false).unwrap();
        assert!(!t.trivial);
        assert_eq!(f.render(&t.basis.generators[0]), "x0");
    }

    #[test]
    fn degree_cap_is_reported() {
        let r = q(2);
        let gens = parse_all(&r, &["x0^3 - x1", "x0*x1^2 - x0 - 1"]);
        let err = buchberger(
            &r,
            &gens,
            Budget {
                max_pairs: 50_000,
                max_degree: 2,
            },
            false,
        )
        .unwrap_err();
        assert!(err.reason.contains("degree"));
        let err = buchberger(
            &r,
            &gens,
            Budget {
                max_pairs: 0,
                max_degree: 30,
            },
            false,
        )
        .unwrap_err();
        assert!(err.reason.contains("S-pair"));
    }

    #[test]
    fn mutual_reduction_equality() {
        let r = q(2);
        let a = parse_all(&r, &["x0*x1", "x0 + x1"]);
        let b = parse_all(&r, &["x0 + x1", "x1^2"]);
        assert!(ideals_equal(&r, &a, &b, Budget::default()).unwrap());
        let c = parse_all(&r, &["x0", "x1^2"]);
        assert!(!ideals_equal(&r, &a, &c, Budget::default()).unwrap());
        let _ = r.domain().one();
    }
}
