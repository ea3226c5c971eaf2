//! Polynomials over a prime field `F_p` with word-sized `p`.
//!
//! Provides the factor-pattern and root machinery used for targeting,
//! Dedekind tests and Frobenius sampling.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::rngs::SmallRng;
use rand::{Rng, SeedableRng};

use crate::arith::{inv_mod, mul_mod};
use crate::poly::IntPoly;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModPoly {
    p: u64,
    coeffs: Vec<u64>,
}

/// Irreducible-factor degrees with multiplicities, sorted ascending.
pub type FactorPattern = Vec<(usize, usize)>;

impl ModPoly {
    pub fn new(p: u64, mut coeffs: Vec<u64>) -> Self {
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        ModPoly { p, coeffs }
    }

    pub fn from_int_poly(f: &IntPoly, p: u64) -> Self {
        let bp = BigInt::from(p);
        ModPoly::new(
            p,
            f.coeffs()
                .iter()
                .map(|c| c.mod_floor(&bp).to_u64().expect("residue fits"))
                .collect(),
        )
    }

    /// Lift to `IntPoly` with coefficients in `[0, p)`.
    pub fn lift(&self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn from_signed(p: u64, coeffs: &[i64]) -> Self {
        ModPoly::new(
            p,
            coeffs
                .iter()
                .map(|&c| c.rem_euclid(p as i64) as u64)
                .collect(),
        )
    }

    pub fn one(p: u64) -> Self {
        ModPoly::new(p, vec![1])
    }

    pub fn x(p: u64) -> Self {
        ModPoly::new(p, vec![0, 1])
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn deg(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lc(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = inv_mod(self.lc(), self.p).expect("nonzero leading coefficient");
        self.scale(inv)
    }

    pub fn scale(&self, c: u64) -> Self {
        ModPoly::new(
            self.p,
            self.coeffs.iter().map(|&a| mul_mod(a, c, self.p)).collect(),
        )
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        ModPoly::new(
            self.p,
            (0..n)
                .map(|i| (self.coeff(i) + o.coeff(i)) % self.p)
                .collect(),
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        ModPoly::new(
            self.p,
            (0..n)
                .map(|i| (self.coeff(i) + self.p - o.coeff(i)) % self.p)
                .collect(),
        )
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return ModPoly::new(self.p, vec![]);
        }
        let p = self.p;
        let mut out = vec![0u64; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + mul_mod(a, b, p)) % p;
            }
        }
        ModPoly::new(p, out)
    }

    pub fn derivative(&self) -> Self {
        ModPoly::new(
            self.p,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| mul_mod(c, i as u64 % self.p, self.p))
                .collect(),
        )
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let p = self.p;
        if self.deg() < d.deg() || self.is_zero() {
            return (ModPoly::new(p, vec![]), self.clone());
        }
        let inv = inv_mod(d.lc(), p).expect("invertible leading coefficient");
        let mut r = self.coeffs.clone();
        let dd = d.deg();
        let mut q = vec![0u64; self.deg() - dd + 1];
        for k in (0..q.len()).rev() {
            let c = mul_mod(r[k + dd], inv, p);
            q[k] = c;
            if c == 0 {
                continue;
            }
            for (i, &b) in d.coeffs.iter().enumerate() {
                r[k + i] = (r[k + i] + p - mul_mod(c, b, p)) % p;
            }
        }
        (ModPoly::new(p, q), ModPoly::new(p, r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    /// Monic gcd (zero only if both inputs are zero).
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, &c| (mul_mod(acc, x, self.p) + c) % self.p)
    }

    /// `self^e mod m`
    pub fn pow_mod(&self, mut e: u64, m: &Self) -> Self {
        let mut base = self.rem(m);
        let mut acc = ModPoly::one(self.p).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    /// p-th root of a polynomial whose derivative vanishes.
    fn pth_root(&self) -> Self {
        let p = self.p as usize;
        ModPoly::new(self.p, self.coeffs.iter().step_by(p).copied().collect())
    }

    /// Squarefree decomposition of a monic polynomial: pairwise coprime
    /// squarefree factors with multiplicities.
    pub fn squarefree_decomposition(&self) -> Vec<(ModPoly, usize)> {
        let f = self.monic();
        let mut out = Vec::new();
        if f.deg() == 0 {
            return out;
        }
        let p = self.p as usize;
        let mut c = f.gcd(&f.derivative());
        let mut w = f.div_rem(&c).0;
        let mut i = 1;
        while !w.is_one() {
            let y = w.gcd(&c);
            let fac = w.div_rem(&y).0;
            if !fac.is_one() {
                out.push((fac, i));
            }
            w = y;
            c = c.div_rem(&w).0;
            i += 1;
        }
        if !c.is_one() {
            for (g, m) in c.pth_root().squarefree_decomposition() {
                out.push((g, m * p));
            }
        }
        out.sort_by_key(|(_, m)| *m);
        out
    }

    /// Distinct-degree factorization of a monic squarefree polynomial:
    /// `(product of all irreducible factors of degree d, d)`.
    pub fn distinct_degree(&self) -> Vec<(ModPoly, usize)> {
        let mut g = self.monic();
        let x = ModPoly::x(self.p);
        let mut h = x.clone();
        let mut out = Vec::new();
        let mut d = 1;
        while g.deg() >= 2 * d {
            h = h.pow_mod(self.p, &g);
            let t = g.gcd(&h.sub(&x));
            if !t.is_one() {
                g = g.div_rem(&t).0;
                h = h.rem(&g);
                out.push((t, d));
            }
            d += 1;
        }
        if g.deg() > 0 {
            let n = g.deg();
            out.push((g, n));
        }
        out
    }

    /// Multiset of (irreducible degree, multiplicity) pairs, sorted.
    pub fn factor_pattern(&self) -> FactorPattern {
        let mut out = Vec::new();
        for (part, mult) in self.squarefree_decomposition() {
            for (prod, d) in part.distinct_degree() {
                for _ in 0..prod.deg() / d {
                    out.push((d, mult));
                }
            }
        }
        out.sort();
        out
    }

    /// All distinct roots in `[0, p)`, ascending.
    pub fn roots(&self) -> Vec<u64> {
        assert!(!self.is_zero(), "roots of the zero polynomial");
        let p = self.p;
        let f = self.monic();
        if f.deg() == 0 {
            return Vec::new();
        }
        if p < 64 {
            return self.roots_by_scan();
        }
        let x = ModPoly::x(p);
        let g = f.gcd(&x.pow_mod(p, &f).sub(&x));
        let mut roots = Vec::new();
        let seed = f.coeffs.iter().fold(p, |acc, &c| {
            acc.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(c)
        });
        let mut rng = SmallRng::seed_from_u64(seed);
        split_linear(&g, &mut rng, &mut roots);
        roots.sort_unstable();
        roots
    }

    /// Exhaustive evaluation over `[0, p)`.
    pub fn roots_by_scan(&self) -> Vec<u64> {
        (0..self.p).filter(|&a| self.eval(a) == 0).collect()
    }
}

/// Equal-degree splitting of a product of distinct linear factors.
fn split_linear(g: &ModPoly, rng: &mut SmallRng, out: &mut Vec<u64>) {
    let p = g.p;
    match g.deg() {
        0 => {}
        1 => {
            // x + c
            out.push((p - g.coeff(0)) % p);
        }
        _ => loop {
            let delta = rng.gen_range(0..p);
            let shifted = ModPoly::new(p, vec![delta, 1]);
            let t = shifted.pow_mod((p - 1) / 2, g).sub(&ModPoly::one(p));
            let d = g.gcd(&t);
            if d.deg() > 0 && d.deg() < g.deg() {
                let rest = g.div_rem(&d).0;
                split_linear(&d, rng, out);
                split_linear(&rest, rng, out);
                return;
            }
        },
    }
}

/// `modpoly_factor_pattern` on an integer polynomial reduced mod `p`.
pub fn factor_pattern_of(f: &IntPoly, p: u64) -> FactorPattern {
    ModPoly::from_int_poly(f, p).factor_pattern()
}
