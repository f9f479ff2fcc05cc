//! Deciding `1 ∈ I` for ideals of `Z[x]` with one field engine.
//!
//! A prime ideal of `Z[x]` containing `I` either meets `Z` in `0` (then
//! `I` is proper over `Q`) or in `pZ` (then `I` is proper mod `p`). So `I` is
//! the unit ideal iff it is the unit ideal over `Q` and modulo every prime;
//! and once a positive integer `D` is known to lie in `I`, only the primes
//! dividing `D` can fail.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::domain::{prime_factors, Integers, PrimeField, Rationals, Ring};
use super::groebner::{is_trivial_over_field, Budget};
use super::polynomial::{PolyRing, Polynomial};
use crate::error::{Error, Result};

/// Trial division bound used when factoring the cleared constant.
const TRIAL_LIMIT: u64 = 1 << 20;

#[derive(Debug, Clone, Serialize)]
pub enum ZCertificate {
    /// `Σ cofactors[j]·g_j = 1` over the integers, checked by expansion.
    Unit {
        /// A positive integer shown to lie in the ideal on the way.
        cleared_constant: String,
        primes_checked: Vec<u64>,
        #[serde(skip)]
        cofactors: Vec<Polynomial<BigInt>>,
    },
    /// Proper over the rationals; the reduced rational basis.
    RationalProper { basis: Vec<String> },
    /// Proper modulo `prime`; the reduced basis over `F_p`.
    PrimeProper { prime: u64, basis: Vec<String> },
}

#[derive(Debug, Clone, Serialize)]
pub struct ZTriviality {
    pub trivial: bool,
    pub certificate: ZCertificate,
}

/// Decides whether the integer-coefficient generators span the unit ideal
/// of `Z[x]`. Budget exhaustion or an unfactorable constant is an error,
/// never a guess.
pub fn is_trivial_over_z(
    zring: &PolyRing<Integers>,
    gens: &[Polynomial<BigInt>],
    budget: Budget,
) -> Result<ZTriviality> {
    let n = zring.nvars();
    let order = zring.order();

    // an integer D in the ideal with explicit integer cofactors
    let (d, d_cofactors) = match constant_combination(zring, gens) {
        Some(found) => found,
        None => {
            let qring = PolyRing::new(Rationals, n, order)?;
            let qgens: Vec<_> = gens
                .iter()
                .map(|g| zring.map_into(g, &qring, |c| BigRational::from_integer(c.clone())))
                .collect();
            let t = is_trivial_over_field(&qring, &qgens, budget, true)?;
            if !t.trivial {
                return Ok(ZTriviality {
                    trivial: false,
                    certificate: ZCertificate::RationalProper {
                        basis: t.basis.generators.iter().map(|p| qring.render(p)).collect(),
                    },
                });
            }
            let h = t.cofactors_for_one.expect("tracked run");
            let mut den = BigInt::one();
            for p in &h {
                for (_, c) in p.terms() {
                    den = den.lcm(c.denom());
                }
            }
            let cof: Vec<Polynomial<BigInt>> = h
                .iter()
                .map(|p| {
                    qring.map_into(p, zring, |c| {
                        (c * BigRational::from_integer(den.clone())).to_integer()
                    })
                })
                .collect();
            (den, cof)
        }
    };
    let d_poly = zring.constant(d.clone());
    if combine(zring, &d_cofactors, gens) != d_poly {
        return Err(Error::Certificate(format!(
            "integer combination does not reproduce {d}"
        )));
    }

    let primes = prime_factors(&d, TRIAL_LIMIT)
        .ok_or_else(|| Error::Budget(format!("could not factor cleared constant {d}")))?;

    // V tracks 1 - Σ C_j g_j; each prime multiplies V by (1 - B_p)^e
    let mut v = zring.one();
    let mut c = vec![zring.zero(); gens.len()];
    for &p in &primes {
        let field = PrimeField::new(p)
            .ok_or_else(|| Error::Budget(format!("prime {p} exceeds the field engine range")))?;
        let fring = PolyRing::new(field, n, order)?;
        let fgens: Vec<_> = gens
            .iter()
            .map(|g| zring.map_into(g, &fring, |x| field.from_int(x)))
            .collect();
        let t = is_trivial_over_field(&fring, &fgens, budget, true)?;
        if !t.trivial {
            return Ok(ZTriviality {
                trivial: false,
                certificate: ZCertificate::PrimeProper {
                    prime: p,
                    basis: t.basis.generators.iter().map(|q| fring.render(q)).collect(),
                },
            });
        }
        let b: Vec<Polynomial<BigInt>> = t
            .cofactors_for_one
            .expect("tracked run")
            .iter()
            .map(|h| fring.map_into(h, zring, |x| BigInt::from(*x)))
            .collect();
        let big_b = combine(zring, &b, gens);
        let one_minus_b = zring.sub(&zring.one(), &big_b);
        let mut e = 0u32;
        let mut rest = d.abs();
        let bp = BigInt::from(p);
        while (&rest % &bp).is_zero() {
            rest /= &bp;
            e += 1;
        }
        for _ in 0..e {
            // 1 - V(1 - B) = (1 - V) + V·B
            for (cj, bj) in c.iter_mut().zip(&b) {
                *cj = zring.add(cj, &zring.mul(&v, bj));
            }
            v = zring.mul(&v, &one_minus_b);
        }
    }
    // now V = D·R with R integral; V = R·Σ a_j g_j
    let mut r_terms = Vec::with_capacity(v.len());
    for (m, coef) in v.terms() {
        let (q, rem) = coef.div_rem(&d);
        if !rem.is_zero() {
            return Err(Error::Certificate(format!(
                "lifted product is not divisible by {d}"
            )));
        }
        r_terms.push((*m, q));
    }
    let r = zring.from_terms(r_terms);
    let cofactors: Vec<Polynomial<BigInt>> = c
        .iter()
        .zip(&d_cofactors)
        .map(|(cj, aj)| zring.add(cj, &zring.mul(&r, aj)))
        .collect();
    if combine(zring, &cofactors, gens) != zring.one() {
        return Err(Error::Certificate(
            "integer cofactors do not sum to 1".into(),
        ));
    }
    Ok(ZTriviality {
        trivial: true,
        certificate: ZCertificate::Unit {
            cleared_constant: d.to_string(),
            primes_checked: primes,
            cofactors,
        },
    })
}

/// The gcd of the constant generators with Bézout cofactors, if any
/// generator is a nonzero constant.
fn constant_combination(
    zring: &PolyRing<Integers>,
    gens: &[Polynomial<BigInt>],
) -> Option<(BigInt, Vec<Polynomial<BigInt>>)> {
    let mut acc: Option<(BigInt, Vec<BigInt>)> = None;
    for (j, g) in gens.iter().enumerate() {
        if !g.is_constant() {
            continue;
        }
        let c = g.terms()[0].1.clone();
        acc = Some(match acc {
            None => {
                let mut coeffs = vec![BigInt::zero(); gens.len()];
                coeffs[j] = c.signum();
                (c.abs(), coeffs)
            }
            Some((d, mut coeffs)) => {
                let eg = d.extended_gcd(&c);
                for x in coeffs.iter_mut() {
                    *x *= &eg.x;
                }
                coeffs[j] += &eg.y;
                let (g, coeffs) = if eg.gcd.is_negative() {
                    (-eg.gcd, coeffs.into_iter().map(|x| -x).collect())
                } else {
                    (eg.gcd, coeffs)
                };
                (g, coeffs)
            }
        });
        if acc.as_ref().is_some_and(|(d, _)| d.is_one()) {
            break;
        }
    }
    acc.map(|(d, coeffs)| (d, coeffs.into_iter().map(|x| zring.constant(x)).collect()))
}

fn combine(
    zring: &PolyRing<Integers>,
    cof: &[Polynomial<BigInt>],
    gens: &[Polynomial<BigInt>],
) -> Polynomial<BigInt> {
    cof.iter().zip(gens).fold(zring.zero(), |acc, (h, g)| {
        zring.add(&acc, &zring.mul(h, g))
    })
}

/// Checks a claimed integer certificate: `Σ h_j g_j = 1` exactly.
pub fn verify_unit_combination(
    zring: &PolyRing<Integers>,
    cofactors: &[Polynomial<BigInt>],
    gens: &[Polynomial<BigInt>],
) -> bool {
    cofactors.len() == gens.len() && combine(zring, cofactors, gens) == zring.one()
}

/// Echelon form of the `Z`-module spanned by a list of integer
/// polynomials (not the ideal): distinct leading monomials, positive
/// leading coefficients. Used to certify that given polynomials are integer
/// combinations of generators and their monomial multiples.
pub struct IntegerSpan<'a> {
    ring: &'a PolyRing<Integers>,
    pivots: std::collections::HashMap<super::monomial::Monomial, Polynomial<BigInt>>,
}

impl<'a> IntegerSpan<'a> {
    pub fn new(ring: &'a PolyRing<Integers>) -> Self {
        IntegerSpan {
            ring,
            pivots: std::collections::HashMap::new(),
        }
    }

    pub fn insert(&mut self, p: &Polynomial<BigInt>) {
        let mut queue = vec![p.clone()];
        while let Some(mut p) = queue.pop() {
            while let Some((m, c)) = p.leading().cloned() {
                let Some(r) = self.pivots.get(&m) else {
                    let p = if c.is_negative() {
                        self.ring.neg(&p)
                    } else {
                        p
                    };
                    self.pivots.insert(m, p);
                    break;
                };
                let a = r.leading().expect("nonzero").1.clone();
                if (&c % &a).is_zero() {
                    p = self.ring.sub(&p, &self.ring.scale(r, &(&c / &a)));
                    continue;
                }
                // replace the pivot by the gcd combination; both old rows
                // then reduce below the pivot monomial
                let eg = a.extended_gcd(&c);
                let r = r.clone();
                let g = eg.gcd.abs();
                let sign = eg.gcd.signum();
                let combo = self.ring.add(
                    &self.ring.scale(&r, &(&eg.x * &sign)),
                    &self.ring.scale(&p, &(&eg.y * &sign)),
                );
                let r_rest = self.ring.sub(&r, &self.ring.scale(&combo, &(&a / &g)));
                let p_rest = self.ring.sub(&p, &self.ring.scale(&combo, &(&c / &g)));
                self.pivots.insert(m, combo);
                queue.push(r_rest);
                p = p_rest;
            }
        }
    }

    /// Whether `f` is an integer combination of the inserted polynomials.
    pub fn contains(&self, f: &Polynomial<BigInt>) -> bool {
        let mut p = f.clone();
        loop {
            let Some((m, c)) = p.leading().cloned() else {
                return true;
            };
            let Some(r) = self.pivots.get(&m) else {
                return false;
            };
            let a = &r.leading().expect("nonzero").1;
            if !(&c % a).is_zero() {
                return false;
            }
            p = self.ring.sub(&p, &self.ring.scale(r, &(&c / a)));
        }
    }
}

/// Sufficient test for `targets ⊆ <gens>` over `Z`: each target must be an
/// integer combination of `m·g` for generators `g` and monomials `m` of
/// degree at most `multiplier_degree`. `false` is inconclusive.
pub fn contained_in_z_ideal(
    zring: &PolyRing<Integers>,
    gens: &[Polynomial<BigInt>],
    targets: &[Polynomial<BigInt>],
    multiplier_degree: u16,
) -> bool {
    let n = zring.nvars();
    let mut monomials = vec![super::monomial::Monomial::ONE];
    let mut frontier = monomials.clone();
    for _ in 0..multiplier_degree {
        let mut next = Vec::new();
        for m in &frontier {
            for v in 0..n {
                let w = m.mul(&super::monomial::Monomial::var(v));
                if !next.contains(&w) {
                    next.push(w);
                }
            }
        }
        monomials.extend(next.iter().copied());
        frontier = next;
    }
    let mut span = IntegerSpan::new(zring);
    for g in gens {
        for m in &monomials {
            span.insert(&zring.mul_term(g, m, &BigInt::one()));
        }
    }
    targets.iter().all(|t| span.contains(t))
}

/// Small helper for callers holding `u64` primes as integers.
pub fn as_prime(p: &BigInt) -> Option<u64> {
    p.to_u64().filter(|&v| PrimeField::new(v).is_some())
}
