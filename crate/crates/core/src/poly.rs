//! Dense univariate polynomials over the integers.
//!
//! Coefficients are stored lowest degree first. Quintics produced by the
//! search use the convention `x^5 - a1 x^4 + a2 x^3 - a3 x^2 + a4 x - a5`,
//! i.e. the coefficient of `x^(5-k)` is `(-1)^k a_k`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::ParseError;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: BigInt) -> Self {
        IntPoly::new(vec![c])
    }

    /// `x`
    pub fn x() -> Self {
        IntPoly::from_i64(&[0, 1])
    }

    /// Monic quintic from search coefficients `[a1, a2, a3, a4, a5]`.
    pub fn from_search_coeffs(a: &[i64; 5]) -> Self {
        let [a1, a2, a3, a4, a5] = *a;
        IntPoly::from_i64(&[-a5, a4, -a3, a2, -a1, 1])
    }

    /// Inverse of [`IntPoly::from_search_coeffs`] for monic quintics.
    pub fn search_coeffs(&self) -> Option<[BigInt; 5]> {
        if self.degree() != Some(5) || !self.lc().is_one() {
            return None;
        }
        let c = &self.coeffs;
        Some([
            -c[4].clone(),
            c[3].clone(),
            -c[2].clone(),
            c[1].clone(),
            -c[0].clone(),
        ])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lc(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.lc().is_one()
    }

    pub fn derivative(&self) -> Self {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        IntPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn neg(&self) -> Self {
        IntPoly::new(self.coeffs.iter().map(|a| -a).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(IntPoly::constant(BigInt::one()), |acc, _| acc.mul(self))
    }

    /// `f(x) -> f(-x)`
    pub fn reflect(&self) -> Self {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// `f(x) -> f(x + k)`
    pub fn shift(&self, k: &BigInt) -> Self {
        let lin = IntPoly::new(vec![k.clone(), BigInt::one()]);
        self.coeffs.iter().rev().fold(IntPoly::zero(), |acc, c| {
            acc.mul(&lin).add(&IntPoly::constant(c.clone()))
        })
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// `den^deg * f(num/den)`, an integer with the sign of `f(num/den)` when `den > 0`.
    pub fn eval_homogeneous(&self, num: &BigInt, den: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        let mut den_pow = BigInt::one();
        // Horner in the homogenised form: sum c_i num^i den^(n-i)
        for c in self.coeffs.iter().rev() {
            acc = acc * num + c * &den_pow;
            den_pow *= den;
        }
        // the loop multiplies den into later (lower) terms, which is exactly
        // sum c_i num^i den^(n-i)
        acc
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divide by the content, keeping the sign of the leading coefficient.
    pub fn primitive_part(&self) -> Self {
        let c = self.content();
        if c.is_zero() || c.is_one() {
            return self.clone();
        }
        IntPoly::new(self.coeffs.iter().map(|a| a / &c).collect())
    }

    /// Pseudo-remainder `lc(b)^(deg a - deg b + 1) * a mod b`.
    pub fn pseudo_rem(&self, b: &Self) -> Self {
        assert!(!b.is_zero(), "pseudo_rem by zero polynomial");
        let db = b.deg();
        let mut r = self.clone();
        if self.is_zero() || self.deg() < db {
            return r;
        }
        let lb = b.lc();
        let mut steps = self.deg() - db + 1;
        while !r.is_zero() && r.deg() >= db {
            let shift = r.deg() - db;
            let lr = r.lc();
            let mut next: Vec<BigInt> = r.coeffs.iter().map(|c| c * &lb).collect();
            for (i, c) in b.coeffs.iter().enumerate() {
                next[i + shift] -= &lr * c;
            }
            r = IntPoly::new(next);
            steps -= 1;
        }
        if steps > 0 {
            r = r.scale(&num_traits::pow(lb, steps));
        }
        r
    }

    /// Exact division; `None` when `b` does not divide `self` over Z.
    pub fn div_exact(&self, b: &Self) -> Option<Self> {
        assert!(!b.is_zero());
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        if self.deg() < b.deg() {
            return None;
        }
        let db = b.deg();
        let lb = b.lc();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); self.deg() - db + 1];
        for k in (0..q.len()).rev() {
            let (qk, rem) = r[k + db].div_rem(&lb);
            if !rem.is_zero() {
                return None;
            }
            for (i, c) in b.coeffs.iter().enumerate() {
                r[k + i] -= &qk * c;
            }
            q[k] = qk;
        }
        r.iter().all(Zero::is_zero).then(|| IntPoly::new(q))
    }

    /// Primitive gcd over Z with positive leading coefficient.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.primitive_part(), other.primitive_part());
        if a.is_zero() {
            return b.normalize_sign();
        }
        if b.is_zero() {
            return a.normalize_sign();
        }
        let content = self.content().gcd(&other.content());
        if a.deg() < b.deg() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        a.primitive_part().normalize_sign().scale(&content)
    }

    fn normalize_sign(self) -> Self {
        if self.lc().is_negative() {
            self.neg()
        } else {
            self
        }
    }

    /// `gcd(f, f')` is constant.
    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).deg() == 0
    }

    /// Resultant via the subresultant algorithm.
    pub fn resultant(&self, other: &Self) -> BigInt {
        if self.is_zero() || other.is_zero() {
            return BigInt::zero();
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        let ca = a.content();
        let cb = b.content();
        a = a.primitive_part();
        b = b.primitive_part();
        let mut sign_neg = false;
        let t = num_traits::pow(ca, b.deg()) * num_traits::pow(cb, a.deg());
        if a.deg() < b.deg() {
            std::mem::swap(&mut a, &mut b);
            if a.deg() % 2 == 1 && b.deg() % 2 == 1 {
                sign_neg = true;
            }
        }
        let mut g = BigInt::one();
        let mut h = BigInt::one();
        loop {
            if b.deg() == 0 {
                let da = a.deg();
                // h^(1 - da) * lc(b)^da
                let num = num_traits::pow(b.lc(), da);
                let res = if da == 0 {
                    h.clone()
                } else {
                    num / num_traits::pow(h.clone(), da - 1)
                };
                let res = res * t;
                return if sign_neg { -res } else { res };
            }
            let delta = a.deg() - b.deg();
            if a.deg() % 2 == 1 && b.deg() % 2 == 1 {
                sign_neg = !sign_neg;
            }
            let r = a.pseudo_rem(&b);
            if r.is_zero() {
                return BigInt::zero();
            }
            a = b;
            let divisor = &g * num_traits::pow(h.clone(), delta);
            b = IntPoly::new(r.coeffs.iter().map(|c| c / &divisor).collect());
            g = a.lc();
            h = if delta == 0 {
                h
            } else {
                num_traits::pow(g.clone(), delta) / num_traits::pow(h.clone(), delta - 1)
            };
        }
    }

    /// `(-1)^(n(n-1)/2) Res(f, f') / lc(f)`.
    pub fn discriminant(&self) -> BigInt {
        let n = self.deg();
        assert!(n >= 1, "discriminant of a constant polynomial");
        let r = self.resultant(&self.derivative()) / self.lc();
        if (n * (n - 1) / 2) % 2 == 1 {
            -r
        } else {
            r
        }
    }
}

impl fmt::Display for IntPoly {
    /// Prints in the style `x^5 - x^4 - 780x^3 - 1795x^2 + 3106x + 344`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            if i == 0 || !mag.is_one() {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for IntPoly {
    type Err = ParseError;

    /// Accepts `x^5 - x^4 - 780x^3 + 2*x - 1` style expressions in `x`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(ParseError::Empty);
        }
        let mut coeffs: Vec<BigInt> = Vec::new();
        let mut terms = Vec::new();
        let mut start = 0;
        let bytes = cleaned.as_bytes();
        for i in 1..bytes.len() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^' {
                terms.push(&cleaned[start..i]);
                start = i;
            }
        }
        terms.push(&cleaned[start..]);
        for term in terms {
            let (neg, body) = match term.as_bytes().first() {
                Some(b'-') => (true, &term[1..]),
                Some(b'+') => (false, &term[1..]),
                _ => (false, term),
            };
            if body.is_empty() {
                return Err(ParseError::Term(term.to_string()));
            }
            let (coef_str, exp) = match body.find('x') {
                None => (body, 0usize),
                Some(pos) => {
                    let rest = &body[pos + 1..];
                    let exp = if rest.is_empty() {
                        1
                    } else if let Some(e) = rest.strip_prefix('^') {
                        e.parse::<usize>()
                            .map_err(|_| ParseError::Term(term.to_string()))?
                    } else {
                        return Err(ParseError::Term(term.to_string()));
                    };
                    (body[..pos].trim_end_matches('*'), exp)
                }
            };
            let mut c = if coef_str.is_empty() {
                BigInt::one()
            } else {
                coef_str
                    .parse::<BigInt>()
                    .map_err(|_| ParseError::Term(term.to_string()))?
            };
            if neg {
                c = -c;
            }
            if coeffs.len() <= exp {
                coeffs.resize(exp + 1, BigInt::zero());
            }
            coeffs[exp] += c;
        }
        Ok(IntPoly::new(coeffs))
    }
}
