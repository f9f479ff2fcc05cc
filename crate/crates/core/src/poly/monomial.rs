//! Dense exponent vectors and the three supported term orders.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

/// Most variables a monomial can carry. Critical ideals are only ever
/// formed at desk scale, where one variable per vertex stays far below this.
pub const MAX_VARS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: [u8; MAX_VARS],
    degree: u16,
}

impl Monomial {
    pub const ONE: Monomial = Monomial {
        exps: [0; MAX_VARS],
        degree: 0,
    };

    pub fn var(i: usize) -> Self {
        let mut m = Self::ONE;
        m.exps[i] = 1;
        m.degree = 1;
        m
    }

    pub fn from_exponents(exps: &[u8]) -> Self {
        assert!(exps.len() <= MAX_VARS, "too many variables");
        let mut m = Self::ONE;
        m.exps[..exps.len()].copy_from_slice(exps);
        m.degree = exps.iter().map(|&e| e as u16).sum();
        m
    }

    pub fn exponent(&self, i: usize) -> u8 {
        self.exps[i]
    }

    pub fn exponents(&self, nvars: usize) -> &[u8] {
        &self.exps[..nvars]
    }

    pub fn degree(&self) -> u32 {
        self.degree as u32
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut exps = [0u8; MAX_VARS];
        for (k, e) in exps.iter_mut().enumerate() {
            *e = self.exps[k]
                .checked_add(other.exps[k])
                .expect("exponent overflow");
        }
        Monomial {
            exps,
            degree: self.degree + other.degree,
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.degree <= other.degree && (0..MAX_VARS).all(|k| self.exps[k] <= other.exps[k])
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        let mut exps = [0u8; MAX_VARS];
        for (k, e) in exps.iter_mut().enumerate() {
            *e = other.exps[k] - self.exps[k];
        }
        Monomial {
            exps,
            degree: other.degree - self.degree,
        }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut exps = [0u8; MAX_VARS];
        for (k, e) in exps.iter_mut().enumerate() {
            *e = self.exps[k].max(other.exps[k]);
        }
        let degree = exps.iter().map(|&e| e as u16).sum();
        Monomial { exps, degree }
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        (0..MAX_VARS).all(|k| self.exps[k] == 0 || other.exps[k] == 0)
    }

    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        for (k, &e) in self.exps.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("x{k}")),
                _ => parts.push(format!("x{k}^{e}")),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MonomialOrder {
    Lex,
    GrLex,
    #[default]
    DegRevLex,
}

impl MonomialOrder {
    pub fn compare(self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Lex => a.exps.cmp(&b.exps),
            MonomialOrder::GrLex => a.degree.cmp(&b.degree).then_with(|| a.exps.cmp(&b.exps)),
            MonomialOrder::DegRevLex => a.degree.cmp(&b.degree).then_with(|| {
                // the last differing exponent decides, smaller wins
                for k in (0..MAX_VARS).rev() {
                    if a.exps[k] != b.exps[k] {
                        return b.exps[k].cmp(&a.exps[k]);
                    }
                }
                Ordering::Equal
            }),
        }
    }
}

impl std::str::FromStr for MonomialOrder {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lex" => Ok(MonomialOrder::Lex),
            "grlex" => Ok(MonomialOrder::GrLex),
            "degrevlex" | "grevlex" => Ok(MonomialOrder::DegRevLex),
            other => Err(format!("unknown monomial order '{other}'")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u8]) -> Monomial {
        Monomial::from_exponents(e)
    }

    #[test]
    fn orders_on_textbook_pairs() {
        use MonomialOrder::*;
        // x0*x2^2 vs x1^3 (same degree)
        let a = m(&[1, 0, 2]);
        let b = m(&[0, 3, 0]);
        assert_eq!(Lex.compare(&a, &b), Ordering::Greater);
        assert_eq!(GrLex.compare(&a, &b), Ordering::Greater);
        assert_eq!(DegRevLex.compare(&a, &b), Ordering::Less);
        // degree dominates in graded orders
        let c = m(&[0, 0, 3]);
        let d = m(&[1, 0, 0]);
        assert_eq!(Lex.compare(&c, &d), Ordering::Less);
        assert_eq!(DegRevLex.compare(&c, &d), Ordering::Greater);
    }

    #[test]
    fn divisibility_and_lcm() {
        let a = m(&[1, 2]);
        let b = m(&[2, 2, 1]);
        assert!(a.divides(&b));
        assert!(!b.divides(&a));
        assert_eq!(a.quotient_of(&b), m(&[1, 0, 1]));
        assert_eq!(a.lcm(&m(&[0, 3])), m(&[1, 3]));
        assert!(m(&[1]).is_coprime(&m(&[0, 4])));
        assert_eq!(m(&[1, 0, 2]).render(), "x0*x2^2");
        assert_eq!(Monomial::ONE.render(), "1");
    }
}
