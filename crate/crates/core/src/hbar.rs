//! Polynomials in the central parameter hbar with exact rational coefficients.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

/// Dense polynomial in hbar over Q. `coeffs[k]` is the coefficient of h^k.
/// Invariant: no trailing zero coefficient (the zero polynomial is empty).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HbarPoly {
    coeffs: Vec<BigRational>,
}

impl HbarPoly {
    pub fn zero() -> Self {
        HbarPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        HbarPoly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = HbarPoly { coeffs: vec![c] };
        p.trim();
        p
    }

    pub fn from_int(n: i64) -> Self {
        HbarPoly::constant(BigRational::from_integer(BigInt::from(n)))
    }

    /// c * h^k.
    pub fn monomial(c: BigRational, k: usize) -> Self {
        if c.is_zero() {
            return HbarPoly::zero();
        }
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = c;
        HbarPoly { coeffs }
    }

    /// h^k with coefficient 1.
    pub fn hbar_pow(k: usize) -> Self {
        HbarPoly::monomial(BigRational::one(), k)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Substitutes a rational value for hbar.
    pub fn eval(&self, v: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * v + c;
        }
        acc
    }

    /// Multiplies by h^k.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return HbarPoly::zero();
        }
        let mut coeffs = vec![BigRational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        HbarPoly { coeffs }
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
    }
}

impl Add for HbarPoly {
    type Output = HbarPoly;
    fn add(mut self, rhs: HbarPoly) -> HbarPoly {
        self += rhs;
        self
    }
}

impl AddAssign for HbarPoly {
    fn add_assign(&mut self, rhs: HbarPoly) {
        if rhs.coeffs.len() > self.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), BigRational::zero());
        }
        for (i, c) in rhs.coeffs.into_iter().enumerate() {
            self.coeffs[i] += c;
        }
        self.trim();
    }
}

impl Sub for HbarPoly {
    type Output = HbarPoly;
    fn sub(mut self, rhs: HbarPoly) -> HbarPoly {
        self -= rhs;
        self
    }
}

impl SubAssign for HbarPoly {
    fn sub_assign(&mut self, rhs: HbarPoly) {
        if rhs.coeffs.len() > self.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), BigRational::zero());
        }
        for (i, c) in rhs.coeffs.into_iter().enumerate() {
            self.coeffs[i] -= c;
        }
        self.trim();
    }
}

impl Neg for HbarPoly {
    type Output = HbarPoly;
    fn neg(mut self) -> HbarPoly {
        for c in &mut self.coeffs {
            *c = -c.clone();
        }
        self
    }
}

impl Mul for HbarPoly {
    type Output = HbarPoly;
    fn mul(self, rhs: HbarPoly) -> HbarPoly {
        (&self).mul(&rhs)
    }
}

impl Mul<&HbarPoly> for &HbarPoly {
    type Output = HbarPoly;
    fn mul(self, rhs: &HbarPoly) -> HbarPoly {
        if self.is_zero() || rhs.is_zero() {
            return HbarPoly::zero();
        }
        let mut coeffs =
            vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        let mut p = HbarPoly { coeffs };
        p.trim();
        p
    }
}

impl MulAssign for HbarPoly {
    fn mul_assign(&mut self, rhs: HbarPoly) {
        *self = (&*self).mul(&rhs);
    }
}

fn fmt_rational(c: &BigRational) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for HbarPoly {
    /// Descending powers, variable `h`: "3/2*h^2 - h + 1".
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for k in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[k];
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign_str = if first {
                if c.is_negative() { "-" } else { "" }
            } else if c.is_negative() {
                " - "
            } else {
                " + "
            };
            let body = if k == 0 {
                fmt_rational(&mag)
            } else {
                let var = if k == 1 { "h".to_string() } else { format!("h^{}", k) };
                if mag.is_one() {
                    var
                } else {
                    format!("{}*{}", fmt_rational(&mag), var)
                }
            };
            write!(f, "{}{}", sign_str, body)?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for HbarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[derive(Debug, thiserror::Error)]
#[error("invalid hbar polynomial: {0}")]
pub struct ParsePolyError(String);

impl FromStr for HbarPoly {
    type Err = ParsePolyError;

    /// Accepts sums of terms like "2*h^3", "-h", "1/2", "h^2", with optional
    /// whitespace around + and -.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(ParsePolyError(s.to_string()));
        }
        // Split into signed terms.
        let mut terms: Vec<(bool, String)> = vec![];
        let mut cur = String::new();
        let mut neg = false;
        let mut started = false;
        for ch in compact.chars() {
            if (ch == '+' || ch == '-') && started {
                terms.push((neg, std::mem::take(&mut cur)));
                neg = ch == '-';
            } else if (ch == '+' || ch == '-') && !started {
                neg = ch == '-';
                started = true;
            } else {
                cur.push(ch);
                started = true;
            }
        }
        terms.push((neg, cur));

        let mut out = HbarPoly::zero();
        for (is_neg, t) in terms {
            if t.is_empty() {
                return Err(ParsePolyError(s.to_string()));
            }
            let (coeff_str, pow) = match t.find('h') {
                None => (t.as_str(), 0usize),
                Some(pos) => {
                    let before = &t[..pos];
                    let after = &t[pos + 1..];
                    let k = if after.is_empty() {
                        1
                    } else {
                        let rest = after
                            .strip_prefix('^')
                            .ok_or_else(|| ParsePolyError(s.to_string()))?;
                        rest.parse::<usize>()
                            .map_err(|_| ParsePolyError(s.to_string()))?
                    };
                    let c = before.strip_suffix('*').unwrap_or(before);
                    (c, k)
                }
            };
            let coeff = if coeff_str.is_empty() {
                BigRational::one()
            } else {
                parse_rational(coeff_str).ok_or_else(|| ParsePolyError(s.to_string()))?
            };
            let coeff = if is_neg { -coeff } else { coeff };
            out += HbarPoly::monomial(coeff, pow);
        }
        Ok(out)
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.parse().ok()?;
        let d: BigInt = d.parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(BigRational::new(n, d))
    } else {
        let n: BigInt = s.parse().ok()?;
        Some(BigRational::from_integer(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_normalization() {
        let h = HbarPoly::hbar_pow(1);
        let p = h.clone() * h.clone() + HbarPoly::from_int(2) * h.clone()
            - HbarPoly::from_int(3);
        assert_eq!(p.degree(), Some(2));
        let q = p.clone() - p.clone();
        assert!(q.is_zero());
        assert_eq!(q.degree(), None);
    }

    #[test]
    fn display_descending_powers() {
        let p = HbarPoly::monomial(BigRational::new(3.into(), 2.into()), 2)
            - HbarPoly::from_int(1);
        assert_eq!(p.to_string(), "3/2*h^2 - 1");
        assert_eq!(HbarPoly::zero().to_string(), "0");
        let m = -HbarPoly::hbar_pow(1);
        assert_eq!(m.to_string(), "-h");
    }

    #[test]
    fn parse_round_trip() {
        for s in ["3/2*h^2 - 1", "-h", "0", "h^3 + h - 2", "1/3", "2*h"] {
            let p: HbarPoly = s.parse().unwrap();
            let back: HbarPoly = p.to_string().parse().unwrap();
            assert_eq!(p, back, "round trip failed for {}", s);
        }
    }

    #[test]
    fn eval_specializes() {
        let p: HbarPoly = "h^2 - 2*h + 1".parse().unwrap();
        let v = p.eval(&BigRational::from_integer(3.into()));
        assert_eq!(v, BigRational::from_integer(4.into()));
    }
}
