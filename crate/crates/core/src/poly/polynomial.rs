//! Sparse polynomials and the ring context that orders and combines them.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::domain::{Integers, Rationals, Ring};
use super::monomial::{Monomial, MonomialOrder, MAX_VARS};
use crate::error::{Error, Result};

/// Terms sorted strictly descending under the owning ring's order, with no
/// zero coefficients. Only a [`PolyRing`] creates or combines these.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<E> {
    pub(crate) terms: Vec<(Monomial, E)>,
}

impl<E> Polynomial<E> {
    pub fn terms(&self) -> &[(Monomial, E)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<&(Monomial, E)> {
        self.terms.first()
    }

    pub fn leading_monomial(&self) -> Option<Monomial> {
        self.terms.first().map(|t| t.0)
    }

    /// Nonzero constant (degree-0 only) polynomial.
    pub fn is_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|t| t.0.degree()).max().unwrap_or(0)
    }
}

/// A term listing `(exponents, coefficient text)` used for JSON export.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub exponents: Vec<u8>,
    pub coefficient: String,
}

#[derive(Debug, Clone)]
pub struct PolyRing<R: Ring> {
    domain: R,
    nvars: usize,
    order: MonomialOrder,
}

impl<R: Ring> PolyRing<R> {
    pub fn new(domain: R, nvars: usize, order: MonomialOrder) -> Result<Self> {
        if nvars > MAX_VARS {
            return Err(Error::Range {
                what: "variable count",
                value: nvars,
                range: "0..=16",
            });
        }
        Ok(PolyRing {
            domain,
            nvars,
            order,
        })
    }

    pub fn domain(&self) -> &R {
        &self.domain
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.order.compare(a, b)
    }

    pub fn zero(&self) -> Polynomial<R::Elem> {
        Polynomial { terms: Vec::new() }
    }

    pub fn one(&self) -> Polynomial<R::Elem> {
        self.constant(self.domain.one())
    }

    pub fn constant(&self, c: R::Elem) -> Polynomial<R::Elem> {
        self.term(Monomial::ONE, c)
    }

    pub fn var(&self, i: usize) -> Polynomial<R::Elem> {
        assert!(i < self.nvars, "variable index out of range");
        self.term(Monomial::var(i), self.domain.one())
    }

    pub fn term(&self, m: Monomial, c: R::Elem) -> Polynomial<R::Elem> {
        if self.domain.is_zero(&c) {
            self.zero()
        } else {
            Polynomial {
                terms: vec![(m, c)],
            }
        }
    }

    /// Sorts, merges equal monomials and drops zeros.
    pub fn from_terms(&self, mut terms: Vec<(Monomial, R::Elem)>) -> Polynomial<R::Elem> {
        terms.sort_by(|a, b| self.cmp(&b.0, &a.0));
        let mut out: Vec<(Monomial, R::Elem)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == m => last.1 = self.domain.add(&last.1, &c),
                _ => out.push((m, c)),
            }
        }
        out.retain(|t| !self.domain.is_zero(&t.1));
        Polynomial { terms: out }
    }

    pub fn neg(&self, p: &Polynomial<R::Elem>) -> Polynomial<R::Elem> {
        Polynomial {
            terms: p
                .terms
                .iter()
                .map(|(m, c)| (*m, self.domain.neg(c)))
                .collect(),
        }
    }

    pub fn add(&self, a: &Polynomial<R::Elem>, b: &Polynomial<R::Elem>) -> Polynomial<R::Elem> {
        self.combine(a, &self.domain.one(), &Monomial::ONE, b)
    }

    pub fn sub(&self, a: &Polynomial<R::Elem>, b: &Polynomial<R::Elem>) -> Polynomial<R::Elem> {
        self.combine(a, &self.domain.neg(&self.domain.one()), &Monomial::ONE, b)
    }

    /// `a + c * m * b` by a single ordered merge.
    pub fn combine(
        &self,
        a: &Polynomial<R::Elem>,
        c: &R::Elem,
        m: &Monomial,
        b: &Polynomial<R::Elem>,
    ) -> Polynomial<R::Elem> {
        let d = &self.domain;
        if d.is_zero(c) || b.is_zero() {
            return a.clone();
        }
        let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
        let mut i = 0;
        let mut bi = b
            .terms
            .iter()
            .map(|(bm, bc)| (bm.mul(m), d.mul(c, bc)))
            .peekable();
        while i < a.terms.len() || bi.peek().is_some() {
            let take_b = match (a.terms.get(i), bi.peek()) {
                (Some(ta), Some(tb)) => match self.cmp(&ta.0, &tb.0) {
                    Ordering::Greater => false,
                    Ordering::Less => true,
                    Ordering::Equal => {
                        let tb = bi.next().expect("peeked");
                        let s = d.add(&a.terms[i].1, &tb.1);
                        if !d.is_zero(&s) {
                            out.push((tb.0, s));
                        }
                        i += 1;
                        continue;
                    }
                },
                (Some(_), None) => false,
                (None, _) => true,
            };
            if take_b {
                out.push(bi.next().expect("peeked"));
            } else {
                out.push(a.terms[i].clone());
                i += 1;
            }
        }
        Polynomial { terms: out }
    }

    pub fn scale(&self, p: &Polynomial<R::Elem>, c: &R::Elem) -> Polynomial<R::Elem> {
        self.mul_term(p, &Monomial::ONE, c)
    }

    pub fn mul_term(
        &self,
        p: &Polynomial<R::Elem>,
        m: &Monomial,
        c: &R::Elem,
    ) -> Polynomial<R::Elem> {
        if self.domain.is_zero(c) {
            return self.zero();
        }
        // multiplying by a monomial preserves the order; over a domain with
        // zero divisors a coefficient could vanish, so filter defensively
        Polynomial {
            terms: p
                .terms
                .iter()
                .map(|(pm, pc)| (pm.mul(m), self.domain.mul(pc, c)))
                .filter(|t| !self.domain.is_zero(&t.1))
                .collect(),
        }
    }

    pub fn mul(&self, a: &Polynomial<R::Elem>, b: &Polynomial<R::Elem>) -> Polynomial<R::Elem> {
        let mut acc = self.zero();
        for (m, c) in &b.terms {
            acc = self.combine(&acc, c, m, a);
        }
        acc
    }

    pub fn evaluate(&self, p: &Polynomial<R::Elem>, point: &[R::Elem]) -> R::Elem {
        assert_eq!(point.len(), self.nvars);
        let d = &self.domain;
        let mut total = d.zero();
        for (m, c) in &p.terms {
            let mut v = c.clone();
            for (k, x) in point.iter().enumerate() {
                for _ in 0..m.exponent(k) {
                    v = d.mul(&v, x);
                }
            }
            total = d.add(&total, &v);
        }
        total
    }

    /// Same polynomial with coefficients pushed through `f` into `target`.
    pub fn map_into<S: Ring>(
        &self,
        p: &Polynomial<R::Elem>,
        target: &PolyRing<S>,
        f: impl Fn(&R::Elem) -> S::Elem,
    ) -> Polynomial<S::Elem> {
        target.from_terms(p.terms.iter().map(|(m, c)| (*m, f(c))).collect())
    }

    /// Text like `x0*x1 - x1 - 2`, terms in descending order.
    pub fn render(&self, p: &Polynomial<R::Elem>) -> String {
        if p.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, (m, c)) in p.terms.iter().enumerate() {
            let (mag, negative) = self.domain.render(c);
            if k == 0 {
                if negative {
                    s.push('-');
                }
            } else {
                s.push_str(if negative { " - " } else { " + " });
            }
            if m.is_one() {
                s.push_str(&mag);
            } else if mag == "1" {
                s.push_str(&m.render());
            } else {
                s.push_str(&mag);
                s.push('*');
                s.push_str(&m.render());
            }
        }
        s
    }

    pub fn to_records(&self, p: &Polynomial<R::Elem>) -> Vec<TermRecord> {
        p.terms
            .iter()
            .map(|(m, c)| {
                let (mag, negative) = self.domain.render(c);
                TermRecord {
                    exponents: m.exponents(self.nvars).to_vec(),
                    coefficient: if negative { format!("-{mag}") } else { mag },
                }
            })
            .collect()
    }

    /// Parses the display format back (integer or `p/q` coefficients,
    /// variables `x<k>`, powers `^e`, products `*`).
    pub fn parse(&self, text: &str) -> Result<Polynomial<R::Elem>>
    where
        R: RationalEmbedding,
    {
        let bad = |message: String| Error::Parse { line: 1, message };
        let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(bad("empty polynomial".into()));
        }
        let mut terms = Vec::new();
        let mut pieces: Vec<(bool, String)> = Vec::new();
        let mut current = String::new();
        let mut negative = false;
        for (k, ch) in cleaned.char_indices() {
            if (ch == '+' || ch == '-') && !cleaned[..k].ends_with('^') {
                if !current.is_empty() {
                    pieces.push((negative, std::mem::take(&mut current)));
                } else if k > 0 {
                    return Err(bad(format!("dangling sign at column {k}")));
                }
                negative = ch == '-';
            } else {
                current.push(ch);
            }
        }
        if current.is_empty() {
            return Err(bad("trailing sign".into()));
        }
        pieces.push((negative, current));
        for (negative, piece) in pieces {
            let mut coeff = BigRational::from_integer(BigInt::from(1));
            let mut exps = [0u8; MAX_VARS];
            for factor in piece.split('*') {
                if let Some(var) = factor.strip_prefix('x') {
                    let (idx, pow) = match var.split_once('^') {
                        Some((i, e)) => (i, e),
                        None => (var, "1"),
                    };
                    let idx: usize = idx
                        .parse()
                        .map_err(|_| bad(format!("bad variable '{factor}'")))?;
                    let pow: u8 = pow
                        .parse()
                        .map_err(|_| bad(format!("bad exponent in '{factor}'")))?;
                    if idx >= self.nvars {
                        return Err(bad(format!("variable x{idx} outside x0..x{}", self.nvars)));
                    }
                    exps[idx] = exps[idx]
                        .checked_add(pow)
                        .ok_or_else(|| bad("exponent overflow".into()))?;
                } else {
                    let value: BigRational = match factor.split_once('/') {
                        Some((p, q)) => {
                            let p: BigInt = p
                                .parse()
                                .map_err(|_| bad(format!("bad number '{factor}'")))?;
                            let q: BigInt = q
                                .parse()
                                .map_err(|_| bad(format!("bad number '{factor}'")))?;
                            if q == BigInt::from(0) {
                                return Err(bad("zero denominator".into()));
                            }
                            BigRational::new(p, q)
                        }
                        None => BigRational::from_integer(
                            factor
                                .parse()
                                .map_err(|_| bad(format!("bad factor '{factor}'")))?,
                        ),
                    };
                    coeff *= value;
                }
            }
            if negative {
                coeff = -coeff;
            }
            let c = self.domain.embed_rational(&coeff).ok_or_else(|| {
                bad(format!(
                    "coefficient {coeff} is not representable in {}",
                    self.domain.tag()
                ))
            })?;
            terms.push((Monomial::from_exponents(&exps), c));
        }
        Ok(self.from_terms(terms))
    }
}

/// Domains that can read rational literals (integers only when integral,
/// prime fields when the denominator is invertible).
pub trait RationalEmbedding: Ring {
    fn embed_rational(&self, q: &BigRational) -> Option<Self::Elem>;
}

impl RationalEmbedding for Rationals {
    fn embed_rational(&self, q: &BigRational) -> Option<BigRational> {
        Some(q.clone())
    }
}

impl RationalEmbedding for Integers {
    fn embed_rational(&self, q: &BigRational) -> Option<BigInt> {
        q.is_integer().then(|| q.to_integer())
    }
}

impl RationalEmbedding for super::domain::PrimeField {
    fn embed_rational(&self, q: &BigRational) -> Option<u64> {
        use super::domain::Field;
        let den = self.from_int(q.denom());
        (den != 0).then(|| self.div(&self.from_int(q.numer()), &den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::domain::PrimeField;

    fn qring(n: usize) -> PolyRing<Rationals> {
        PolyRing::new(Rationals, n, MonomialOrder::DegRevLex).unwrap()
    }

    #[test]
    fn arithmetic_and_rendering() {
        let r = qring(2);
        let x = r.var(0);
        let y = r.var(1);
        let two = r.constant(r.domain().from_i64(2));
        let p = r.sub(&r.sub(&r.mul(&x, &y), &y), &two);
        assert_eq!(r.render(&p), "x0*x1 - x1 - 2");
        let sq = r.mul(&r.add(&x, &y), &r.sub(&x, &y));
        assert_eq!(r.render(&sq), "x0^2 - x1^2");
        assert!(r.sub(&p, &p).is_zero());
    }

    #[test]
    fn parse_round_trips() {
        let r = qring(3);
        for text in [
            "x0*x1 - x1 - 2",
            "x2^2 - x2 - 1",
            "-1/2*x0 + 3",
            "1",
            "x0*x1*x2 - x0 - x2",
        ] {
            let p = r.parse(text).unwrap();
            assert_eq!(r.render(&p), text, "{text}");
        }
        assert!(r.parse("x7").is_err());
        assert!(r.parse("x0 +").is_err());
        assert!(r.parse("").is_err());
        // non-ASCII text is an error, not a panic
        assert!(r.parse("x0·x1 - 1").is_err());
        assert!(r.parse("é+x0").is_err());
    }

    #[test]
    fn prime_field_parse_reduces() {
        let f = PolyRing::new(PrimeField::new(5).unwrap(), 1, MonomialOrder::DegRevLex).unwrap();
        let p = f.parse("x0 + 6 + 1/2").unwrap();
        // 6 + 1/2 = 13/2 = 13 * 3 = 39 = 4 (mod 5)
        assert_eq!(p.terms()[1].1, 4);
        assert!(f.parse("1/5").is_err());
    }

    #[test]
    fn evaluation() {
        let r = qring(3);
        let p = r.parse("x0*x1*x2 - x0 - x2").unwrap();
        let one = r.domain().from_i64(1);
        let pt = vec![one.clone(), r.domain().from_i64(2), one];
        assert_eq!(r.evaluate(&p, &pt), r.domain().from_i64(0));
    }
}
