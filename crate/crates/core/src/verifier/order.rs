//! Orders of `Q[x]/(f)` localized at a prime: Dedekind's criterion,
//! round-2 enlargement and splitting types read off characteristic
//! polynomials of elements of the enlarged order.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::rngs::SmallRng;
use rand::{Rng, SeedableRng};

use crate::arith::{mul_mod, pow_mod, valuation};
use crate::modp::{FactorPattern, ModPoly};
use crate::poly::IntPoly;

/// Residue of a nonzero-modulus big integer as a word.
fn red(x: &BigInt, q: u64) -> u64 {
    x.mod_floor(&BigInt::from(q))
        .to_u64()
        .expect("residue fits")
}

/// Dedekind's criterion: whether `Z[x]/(f)` is maximal at `q`.
pub fn dedekind_q_maximal(f: &IntPoly, q: u64) -> bool {
    assert!(f.is_monic(), "Dedekind criterion needs a monic polynomial");
    let fbar = ModPoly::from_int_poly(f, q);
    let g = fbar
        .squarefree_decomposition()
        .into_iter()
        .fold(ModPoly::one(q), |acc, (part, _)| acc.mul(&part));
    let h = fbar.div_rem(&g).0;
    let diff = g.lift().mul(&h.lift()).sub(f);
    let bq = BigInt::from(q);
    let big_f = IntPoly::new(diff.coeffs().iter().map(|c| c / &bq).collect());
    let fq = ModPoly::from_int_poly(&big_f, q);
    fq.gcd(&g).gcd(&h).deg() == 0
}

/// Hermite normal form of a full-rank integer lattice: `n` upper-triangular
/// rows with positive diagonal and reduced entries above it.
pub fn hnf(mut rows: Vec<Vec<BigInt>>, n: usize) -> Vec<Vec<BigInt>> {
    let mut r0 = 0;
    for col in 0..n {
        loop {
            let pivot = (r0..rows.len())
                .filter(|&r| !rows[r][col].is_zero())
                .min_by(|&a, &b| rows[a][col].abs().cmp(&rows[b][col].abs()));
            let Some(pivot) = pivot else { break };
            rows.swap(r0, pivot);
            let mut done = true;
            for r in r0 + 1..rows.len() {
                if rows[r][col].is_zero() {
                    continue;
                }
                let m = Integer::div_floor(&rows[r][col], &rows[r0][col]);
                for c in col..n {
                    let t = &m * &rows[r0][c];
                    rows[r][c] -= t;
                }
                if !rows[r][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        assert!(
            r0 < rows.len() && !rows[r0][col].is_zero(),
            "hnf: lattice is not of full rank"
        );
        if rows[r0][col].is_negative() {
            for c in col..n {
                rows[r0][c] = -&rows[r0][c];
            }
        }
        for r in 0..r0 {
            let m = Integer::div_floor(&rows[r][col], &rows[r0][col]);
            if !m.is_zero() {
                for c in col..n {
                    let t = &m * &rows[r0][c];
                    rows[r][c] -= t;
                }
            }
        }
        r0 += 1;
    }
    rows.truncate(n);
    rows
}

/// Solves `x B = y` for upper-triangular `B`, if the solution is integral.
fn solve_upper(b: &[Vec<BigInt>], y: &[BigInt]) -> Option<Vec<BigInt>> {
    let n = b.len();
    let mut x: Vec<BigInt> = Vec::with_capacity(n);
    for j in 0..n {
        let mut acc = y[j].clone();
        for (i, xi) in x.iter().enumerate() {
            acc -= xi * &b[i][j];
        }
        let (qt, r) = acc.div_rem(&b[j][j]);
        if !r.is_zero() {
            return None;
        }
        x.push(qt);
    }
    Some(x)
}

/// Basis of `{x : x A = 0}` over `F_q`, where `A` is given by its rows.
pub fn left_kernel_mod(rows: &[Vec<u64>], q: u64) -> Vec<Vec<u64>> {
    let m = rows.len();
    let k = rows.first().map_or(0, |r| r.len());
    let mut aug: Vec<Vec<u64>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut v: Vec<u64> = r.iter().map(|&x| x % q).collect();
            v.extend((0..m).map(|j| u64::from(i == j)));
            v
        })
        .collect();
    let mut rank = 0;
    for col in 0..k {
        let Some(piv) = (rank..m).find(|&r| aug[r][col] != 0) else {
            continue;
        };
        aug.swap(rank, piv);
        let inv = pow_mod(aug[rank][col], q - 2, q);
        for c in 0..k + m {
            aug[rank][c] = mul_mod(aug[rank][c], inv, q);
        }
        for r in 0..m {
            if r != rank && aug[r][col] != 0 {
                let factor = aug[r][col];
                for c in 0..k + m {
                    let sub = mul_mod(factor, aug[rank][c], q);
                    aug[r][c] = (aug[r][c] + q - sub) % q;
                }
            }
        }
        rank += 1;
    }
    aug[rank..].iter().map(|r| r[k..].to_vec()).collect()
}

/// Power sums `Tr(theta^0..theta^(count-1))` of a monic polynomial.
pub fn power_sums(f: &IntPoly, count: usize) -> Vec<BigInt> {
    let n = f.deg();
    // e_i from f = x^n + c_(n-1) x^(n-1) + ...: e_i = (-1)^i c_(n-i)
    let e: Vec<BigInt> = (0..=n)
        .map(|i| {
            let c = f.coeff(n - i);
            if i % 2 == 0 {
                c
            } else {
                -c
            }
        })
        .collect();
    let mut s: Vec<BigInt> = Vec::with_capacity(count);
    for k in 0..count {
        if k == 0 {
            s.push(BigInt::from(n));
            continue;
        }
        let mut acc = BigInt::zero();
        for i in 1..=k.min(n) {
            let term = if i == k { &e[i] * k } else { &e[i] * &s[k - i] };
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        s.push(acc);
    }
    s
}

/// Characteristic polynomial of `g(theta)/den` in `Q[x]/(f)`, when integral.
pub fn charpoly(f: &IntPoly, g: &IntPoly, den: &BigInt) -> Option<IntPoly> {
    let n = f.deg();
    let s = power_sums(f, n);
    let mut traces = vec![BigInt::zero(); n + 1];
    let mut pw = IntPoly::constant(BigInt::one());
    let mut dk = BigInt::one();
    for t in traces.iter_mut().skip(1) {
        pw = pw.mul(g).pseudo_rem(f);
        dk *= den;
        let num: BigInt = pw.coeffs().iter().zip(&s).map(|(c, sm)| c * sm).sum();
        let (qt, r) = num.div_rem(&dk);
        if !r.is_zero() {
            return None;
        }
        *t = qt;
    }
    // Newton: k e_k = sum_(i=1..k) (-1)^(i-1) e_(k-i) p_i
    let mut e = vec![BigInt::one()];
    for k in 1..=n {
        let mut acc = BigInt::zero();
        for i in 1..=k {
            let term = &e[k - i] * &traces[i];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        let (qt, r) = acc.div_rem(&BigInt::from(k));
        if !r.is_zero() {
            return None;
        }
        e.push(qt);
    }
    let mut coeffs = vec![BigInt::zero(); n + 1];
    for (k, ek) in e.iter().enumerate() {
        coeffs[n - k] = if k % 2 == 0 { ek.clone() } else { -ek };
    }
    Some(IntPoly::new(coeffs))
}

/// An order containing `Z[theta]`: basis elements `(1/denom) sum_j basis[i][j] theta^j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Order {
    pub basis: Vec<Vec<BigInt>>,
    pub denom: BigInt,
}

impl Order {
    pub fn equation_order(n: usize) -> Self {
        Order {
            basis: (0..n)
                .map(|i| (0..n).map(|j| BigInt::from(u8::from(i == j))).collect())
                .collect(),
            denom: BigInt::one(),
        }
    }

    fn element_poly(&self, i: usize) -> IntPoly {
        IntPoly::new(self.basis[i].clone())
    }

    /// Integer combination of the basis as `(g, denom)`.
    pub fn element(&self, coords: &[BigInt]) -> IntPoly {
        coords
            .iter()
            .enumerate()
            .fold(IntPoly::zero(), |acc, (i, c)| {
                acc.add(&self.element_poly(i).scale(c))
            })
    }

    /// `mt[i][j]` = coordinates of `w_i w_j` in the basis.
    fn mult_table(&self, f: &IntPoly) -> Vec<Vec<Vec<BigInt>>> {
        let n = self.basis.len();
        let scaled: Vec<Vec<BigInt>> = self
            .basis
            .iter()
            .map(|r| r.iter().map(|x| x * &self.denom).collect())
            .collect();
        let mut mt = vec![vec![Vec::new(); n]; n];
        for i in 0..n {
            for j in i..n {
                let c = self
                    .element_poly(i)
                    .mul(&self.element_poly(j))
                    .pseudo_rem(f);
                let y: Vec<BigInt> = (0..n).map(|k| c.coeff(k)).collect();
                let x = solve_upper(&scaled, &y).expect("order is closed under multiplication");
                mt[i][j] = x.clone();
                mt[j][i] = x;
            }
        }
        mt
    }

    /// Index `[O : Z[theta]]`.
    pub fn index(&self) -> BigInt {
        let n = self.basis.len() as u32;
        let diag: BigInt = (0..self.basis.len())
            .map(|i| self.basis[i][i].clone())
            .product();
        self.denom.pow(n) / diag
    }
}

fn mul_mod_q(mt: &[Vec<Vec<u64>>], a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    let n = a.len();
    let mut out = vec![0u64; n];
    for i in 0..n {
        if a[i] == 0 {
            continue;
        }
        for j in 0..n {
            if b[j] == 0 {
                continue;
            }
            let c = mul_mod(a[i], b[j], q);
            for k in 0..n {
                out[k] = (out[k] + mul_mod(c, mt[i][j][k], q)) % q;
            }
        }
    }
    out
}

fn pow_mod_q(mt: &[Vec<Vec<u64>>], a: &[u64], mut e: u128, one: &[u64], q: u64) -> Vec<u64> {
    let mut acc = one.to_vec();
    let mut base = a.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod_q(mt, &acc, &base, q);
        }
        base = mul_mod_q(mt, &base, &base, q);
        e >>= 1;
    }
    acc
}

fn with_q_multiples(mut gens: Vec<Vec<BigInt>>, n: usize, q: u64) -> Vec<Vec<BigInt>> {
    for i in 0..n {
        gens.push(
            (0..n)
                .map(|j| {
                    if i == j {
                        BigInt::from(q)
                    } else {
                        BigInt::zero()
                    }
                })
                .collect(),
        );
    }
    gens
}

fn lift_rows(rows: &[Vec<u64>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

/// One enlargement step: the ring of multipliers of the q-radical.
/// Returns the new order and `log_q` of the index gain, or `None` when the
/// order is already q-maximal.
fn enlarge(f: &IntPoly, order: &Order, q: u64) -> Option<(Order, u32)> {
    let n = f.deg();
    let mt = order.mult_table(f);
    let mtq: Vec<Vec<Vec<u64>>> = mt
        .iter()
        .map(|row| {
            row.iter()
                .map(|v| v.iter().map(|x| red(x, q)).collect())
                .collect()
        })
        .collect();
    // 1 in basis coordinates: sum x_k B_k = d e_0
    let mut e0 = vec![BigInt::zero(); n];
    e0[0] = order.denom.clone();
    let one: Vec<u64> = solve_upper(&order.basis, &e0)
        .expect("1 lies in the order")
        .iter()
        .map(|x| red(x, q))
        .collect();

    let mut qj: u128 = q as u128;
    while qj < n as u128 {
        qj *= q as u128;
    }
    let frob: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            let mut w = vec![0u64; n];
            w[i] = 1;
            pow_mod_q(&mtq, &w, qj, &one, q)
        })
        .collect();
    let radical = hnf(
        with_q_multiples(lift_rows(&left_kernel_mod(&frob, q)), n, q),
        n,
    );

    // U = {x in O : x I in qI}, tested on basis products w_i * beta_k
    let mut conditions: Vec<Vec<u64>> = vec![Vec::with_capacity(n * n); n];
    for (i, cond) in conditions.iter_mut().enumerate() {
        for beta in &radical {
            let mut y = vec![BigInt::zero(); n];
            for (l, bl) in beta.iter().enumerate() {
                if bl.is_zero() {
                    continue;
                }
                for (m, ym) in y.iter_mut().enumerate() {
                    *ym += bl * &mt[i][l][m];
                }
            }
            let z = solve_upper(&radical, &y).expect("radical is an ideal");
            cond.extend(z.iter().map(|x| red(x, q)));
        }
    }
    let ker = left_kernel_mod(&conditions, q);
    if ker.is_empty() {
        return None;
    }
    let dim = ker.len() as u32;
    let u = hnf(with_q_multiples(lift_rows(&ker), n, q), n);
    // new basis (1/(q d)) * (u B)
    let prod: Vec<Vec<BigInt>> = u
        .iter()
        .map(|row| {
            (0..n)
                .map(|j| row.iter().zip(&order.basis).map(|(a, b)| a * &b[j]).sum())
                .collect()
        })
        .collect();
    let mut basis = hnf(prod, n);
    let mut denom = &order.denom * q;
    let g = basis
        .iter()
        .flatten()
        .fold(denom.clone(), |acc, x| acc.gcd(x));
    if !g.is_one() {
        for x in basis.iter_mut().flatten() {
            *x /= &g;
        }
        denom /= &g;
    }
    Some((Order { basis, denom }, dim))
}

/// A q-maximal order and the valuation data found on the way.
#[derive(Debug, Clone)]
pub struct LocalMaximalOrder {
    pub q: u64,
    pub order: Order,
    /// `v_q([O : Z[theta]])`
    pub index_valuation: u32,
    /// `v_q(d_K)`
    pub disc_valuation: u32,
}

/// Round-2 enlargement at `q` without shortcuts.
pub fn q_maximal_order_by_enlargement(f: &IntPoly, q: u64) -> LocalMaximalOrder {
    let disc = f.discriminant();
    assert!(!disc.is_zero(), "polynomial must be squarefree");
    let mut order = Order::equation_order(f.deg());
    let mut gained = 0;
    while let Some((next, dim)) = enlarge(f, &order, q) {
        order = next;
        gained += dim;
    }
    let v = valuation(&disc, q).0;
    LocalMaximalOrder {
        q,
        order,
        index_valuation: gained,
        disc_valuation: v - 2 * gained,
    }
}

/// q-maximal order, skipping enlargement when `q^2` does not divide the
/// discriminant or Dedekind's criterion already certifies maximality.
pub fn q_maximal_order(f: &IntPoly, q: u64) -> LocalMaximalOrder {
    let disc = f.discriminant();
    let v = valuation(&disc, q).0;
    if v < 2 || dedekind_q_maximal(f, q) {
        return LocalMaximalOrder {
            q,
            order: Order::equation_order(f.deg()),
            index_valuation: 0,
            disc_valuation: v,
        };
    }
    q_maximal_order_by_enlargement(f, q)
}

/// `v_q(d_K)` for the field defined by the monic irreducible `f`.
pub fn disc_valuation_at_q(f: &IntPoly, q: u64) -> u32 {
    q_maximal_order(f, q).disc_valuation
}

/// Decomposition of `q` in the field: `(e_i, f_i)` pairs, sorted.
pub type Splitting = Vec<(u32, u32)>;

fn splitting_from_pattern(pattern: &FactorPattern) -> Splitting {
    let mut out: Splitting = pattern.iter().map(|&(d, m)| (m as u32, d as u32)).collect();
    out.sort_by(|a, b| b.cmp(a));
    out
}

/// Splitting type of `q`, via an element of the q-maximal order whose
/// characteristic polynomial has minimal q-valuation of its discriminant.
/// Returns `None` if no such element turns up within the attempt budget.
pub fn splitting_type(f: &IntPoly, local: &LocalMaximalOrder, seed: u64) -> Option<Splitting> {
    let q = local.q;
    if local.index_valuation == 0 && dedekind_q_maximal(f, q) {
        return Some(splitting_from_pattern(
            &ModPoly::from_int_poly(f, q).factor_pattern(),
        ));
    }
    let n = f.deg();
    let mut rng = SmallRng::seed_from_u64(seed ^ q.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let range = q.min(1 << 16).max(2);
    for _ in 0..200 {
        let coords: Vec<BigInt> = (0..n)
            .map(|_| BigInt::from(rng.gen_range(0..range)))
            .collect();
        let g = local.order.element(&coords);
        let Some(chi) = charpoly(f, &g, &local.order.denom) else {
            continue;
        };
        let d = chi.discriminant();
        if d.is_zero() {
            continue;
        }
        if valuation(&d, q).0 == local.disc_valuation && dedekind_q_maximal(&chi, q) {
            return Some(splitting_from_pattern(
                &ModPoly::from_int_poly(&chi, q).factor_pattern(),
            ));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    fn table_1951() -> IntPoly {
        "x^5 - x^4 - 780x^3 - 1795x^2 + 3106x + 344"
            .parse()
            .unwrap()
    }

    #[test]
    fn dedekind_examples() {
        assert!(!dedekind_q_maximal(&p(&[-5, 0, 1]), 2));
        assert!(dedekind_q_maximal(&p(&[-5, 0, 1]), 5));
        assert!(dedekind_q_maximal(&p(&[-2, 0, 0, 0, 0, 1]), 3));
        // x^2 - 3 at 2: ramified yet maximal
        assert!(dedekind_q_maximal(&p(&[-3, 0, 1]), 2));
        // x^2 - 8: index 2
        assert!(!dedekind_q_maximal(&p(&[-8, 0, 1]), 2));
        let period11 = p(&[1, 3, -3, -4, 1, 1]);
        assert!(dedekind_q_maximal(&period11, 11));
    }

    #[test]
    fn quadratic_valuations() {
        assert_eq!(disc_valuation_at_q(&p(&[-5, 0, 1]), 2), 0);
        assert_eq!(disc_valuation_at_q(&p(&[-5, 0, 1]), 5), 1);
        // Q(sqrt 2): disc 8
        assert_eq!(disc_valuation_at_q(&p(&[-8, 0, 1]), 2), 3);
        // x^2 - 45 defines Q(sqrt 5)
        assert_eq!(disc_valuation_at_q(&p(&[-45, 0, 1]), 3), 0);
        assert_eq!(disc_valuation_at_q(&p(&[-45, 0, 1]), 5), 1);
        // x^2 - 12 defines Q(sqrt 3), disc 12
        assert_eq!(disc_valuation_at_q(&p(&[-12, 0, 1]), 2), 2);
    }

    #[test]
    fn cubic_with_index() {
        // theta = 3 * 2^(1/3): x^3 - 54, field disc -108 = -2^2 3^3
        let f = p(&[-54, 0, 0, 1]);
        assert_eq!(disc_valuation_at_q(&f, 3), 3);
        assert_eq!(disc_valuation_at_q(&f, 2), 2);
        let o = q_maximal_order(&f, 3);
        assert_eq!(o.order.index(), BigInt::from(27));
    }

    #[test]
    fn table_row_valuations() {
        let f = table_1951();
        assert_eq!(disc_valuation_at_q(&f, 1951), 4);
        for q in [2u64, 7, 71, 137] {
            assert_eq!(disc_valuation_at_q(&f, q), 0, "q = {q}");
            assert_eq!(q_maximal_order(&f, q).index_valuation, 1);
        }
    }

    #[test]
    fn splitting_types() {
        let f = table_1951();
        let local = q_maximal_order(&f, 1951);
        assert_eq!(splitting_type(&f, &local, 1), Some(vec![(5, 1)]));
        // 7 divides the index; the type must still use all 5 degrees
        let local = q_maximal_order(&f, 7);
        let s = splitting_type(&f, &local, 1).unwrap();
        assert_eq!(s.iter().map(|&(e, d)| e * d).sum::<u32>(), 5);
        assert!(s.iter().all(|&(e, _)| e == 1));
    }

    #[test]
    fn charpoly_of_theta_squared() {
        // theta^2 for x^2 - 5 has charpoly (x - 5)^2
        let f = p(&[-5, 0, 1]);
        let c = charpoly(&f, &p(&[0, 0, 1]), &BigInt::one()).unwrap();
        assert_eq!(c, p(&[25, -10, 1]));
        // (1 + theta)/2 has charpoly x^2 - x - 1
        let c = charpoly(&f, &p(&[1, 1]), &BigInt::from(2)).unwrap();
        assert_eq!(c, p(&[-1, -1, 1]));
    }

    #[test]
    fn kernel_mod_q() {
        let rows = vec![vec![1, 2], vec![2, 4], vec![0, 1]];
        let k = left_kernel_mod(&rows, 7);
        assert_eq!(k.len(), 1);
        let v = &k[0];
        for c in 0..2 {
            let s: u64 = (0..3).map(|r| v[r] * rows[r][c]).sum();
            assert_eq!(s % 7, 0);
        }
    }
}
