//! Factorization of univariate polynomials over the rationals.
//!
//! Squarefree decomposition (Yun) followed by Zassenhaus on each squarefree
//! part: factor modulo a small prime with distinct-degree and
//! Cantor–Zassenhaus equal-degree splitting, Hensel-lift the modular
//! factorization, then recombine lifted factors by trial division.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Field, Poly, Rational};

/// Squarefree decomposition: pairs `(g_i, i)` with `p = c * prod g_i^i`,
/// every `g_i` monic, squarefree and pairwise coprime.
pub fn squarefree_decomposition(p: &Poly<Rational>) -> Vec<(Poly<Rational>, usize)> {
    let mut out = Vec::new();
    if p.is_constant() {
        return out;
    }
    let f = p.monic();
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.div_rem(&a0).0;
    let c = df.div_rem(&a0).0;
    let mut d = c.sub_poly(&b.derivative());
    let mut i = 1;
    while !b.is_constant() {
        let a = b.gcd(&d);
        let b_next = b.div_rem(&a).0;
        let c_next = d.div_rem(&a).0;
        d = c_next.sub_poly(&b_next.derivative());
        if !a.is_constant() {
            out.push((a, i));
        }
        b = b_next;
        i += 1;
    }
    out
}

/// Complete factorization into monic irreducible factors over the rationals,
/// with multiplicities. The constant factor is dropped. Output is sorted by
/// degree, then coefficients, so it is deterministic.
pub fn factor(p: &Poly<Rational>) -> Vec<(Poly<Rational>, usize)> {
    let mut out = Vec::new();
    for (part, mult) in squarefree_decomposition(p) {
        for g in factor_squarefree(&part) {
            out.push((g, mult));
        }
    }
    out.sort_by(|(a, _), (b, _)| {
        a.degree()
            .cmp(&b.degree())
            .then_with(|| a.coeffs().cmp(b.coeffs()))
    });
    out
}

/// Irreducibility over the rationals. Constants are not irreducible.
pub fn is_irreducible(p: &Poly<Rational>) -> bool {
    match p.degree() {
        None | Some(0) => false,
        Some(1) => true,
        Some(_) => {
            let f = factor(p);
            f.len() == 1 && f[0].1 == 1
        }
    }
}

fn factor_squarefree(p: &Poly<Rational>) -> Vec<Poly<Rational>> {
    if p.degree() == Some(1) {
        return vec![p.monic()];
    }
    let f = primitive_integer(p);
    zassenhaus(&f)
        .into_iter()
        .map(|g| from_integer(&g).monic())
        .collect()
}

/// Scale to a primitive integer polynomial with positive leading coefficient.
pub fn primitive_integer(p: &Poly<Rational>) -> Vec<BigInt> {
    let mut denom_lcm = BigInt::one();
    for c in p.coeffs() {
        denom_lcm = denom_lcm.lcm(c.denom());
    }
    let ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| (c * Rational::from_integer(denom_lcm.clone())).to_integer())
        .collect();
    primitive_part(&ints)
}

fn primitive_part(ints: &[BigInt]) -> Vec<BigInt> {
    let mut content = BigInt::zero();
    for c in ints {
        content = content.gcd(c);
    }
    if content.is_zero() {
        return ints.to_vec();
    }
    if ints.last().is_some_and(|c| c.is_negative()) {
        content = -content;
    }
    ints.iter().map(|c| c / &content).collect()
}

fn from_integer(ints: &[BigInt]) -> Poly<Rational> {
    Poly::new(
        ints.iter()
            .map(|c| Rational::from_integer(c.clone()))
            .collect(),
    )
}

/// `r mod p`, or `None` when `p` divides the denominator.
pub(crate) fn rational_residue(r: &Rational, p: u64) -> Option<u64> {
    let zp = Zp(p);
    let den = zp.reduce(r.denom());
    (den != 0).then(|| zp.mul(zp.reduce(r.numer()), zp.inv(den)))
}

/// Prime used for the modular gcd test.
const GCD_PRIME: u64 = (1 << 61) - 1;

/// Degree of `gcd(a mod p, b mod p)`, an upper bound for the degree of the
/// gcd over Q. `None` when some coefficient has no image or a leading
/// coefficient vanishes mod p.
pub(crate) fn modular_gcd_degree<F: Field>(a: &Poly<F>, b: &Poly<F>) -> Option<usize> {
    let zp = Zp(GCD_PRIME);
    let image = |p: &Poly<F>| -> Option<Vec<u64>> {
        let v: Vec<u64> = p
            .coeffs()
            .iter()
            .map(|c| c.residue(GCD_PRIME))
            .collect::<Option<_>>()?;
        (v.last().copied() != Some(0)).then_some(v)
    };
    let (ia, ib) = (image(a)?, image(b)?);
    Some(zp.poly_gcd(&ia, &ib).len().saturating_sub(1))
}

// ---------------------------------------------------------------------------
// Arithmetic in F_p[x], p < 2^32, polynomials as trimmed ascending Vec<u64>.

#[derive(Clone, Copy)]
struct Zp(u64);

impl Zp {
    fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.0 as u128) as u64
    }

    fn add(self, a: u64, b: u64) -> u64 {
        (a + b) % self.0
    }

    fn sub(self, a: u64, b: u64) -> u64 {
        (a + self.0 - b) % self.0
    }

    fn pow(self, mut b: u64, mut e: u64) -> u64 {
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    fn inv(self, a: u64) -> u64 {
        debug_assert!(a != 0);
        self.pow(a, self.0 - 2)
    }

    fn reduce(self, c: &BigInt) -> u64 {
        c.mod_floor(&BigInt::from(self.0)).to_u64().expect("fits")
    }

    fn trim(v: &mut Vec<u64>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }

    fn poly_sub(self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let n = a.len().max(b.len());
        let mut v: Vec<u64> = (0..n)
            .map(|i| self.sub(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
            .collect();
        Self::trim(&mut v);
        v
    }

    fn poly_mul(self, a: &[u64], b: &[u64]) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut v = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                v[i + j] = self.add(v[i + j], self.mul(x, y));
            }
        }
        Self::trim(&mut v);
        v
    }

    fn poly_divrem(self, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>) {
        assert!(!b.is_empty(), "division by zero polynomial mod p");
        let db = b.len() - 1;
        let mut r = a.to_vec();
        if r.len() <= db {
            return (Vec::new(), r);
        }
        let inv = self.inv(b[db]);
        let mut q = vec![0u64; r.len() - db];
        for k in (0..q.len()).rev() {
            let c = self.mul(r[k + db], inv);
            if c == 0 {
                continue;
            }
            for (i, &y) in b.iter().enumerate() {
                r[k + i] = self.sub(r[k + i], self.mul(c, y));
            }
            q[k] = c;
        }
        r.truncate(db);
        Self::trim(&mut r);
        Self::trim(&mut q);
        (q, r)
    }

    fn poly_rem(self, a: &[u64], b: &[u64]) -> Vec<u64> {
        self.poly_divrem(a, b).1
    }

    fn monic(self, a: &[u64]) -> Vec<u64> {
        match a.last() {
            None => Vec::new(),
            Some(&lc) => {
                let inv = self.inv(lc);
                a.iter().map(|&c| self.mul(c, inv)).collect()
            }
        }
    }

    fn poly_gcd(self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let (mut a, mut b) = (a.to_vec(), b.to_vec());
        while !b.is_empty() {
            let r = self.poly_rem(&a, &b);
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    /// `(s, t)` with `s*a + t*b = 1`; `a`, `b` coprime.
    fn poly_bezout(self, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>) {
        let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
        let (mut s0, mut s1) = (vec![1u64], Vec::new());
        let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
        while !r1.is_empty() {
            let (q, r) = self.poly_divrem(&r0, &r1);
            let s2 = self.poly_sub(&s0, &self.poly_mul(&q, &s1));
            let t2 = self.poly_sub(&t0, &self.poly_mul(&q, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        debug_assert_eq!(r0.len(), 1, "Bezout inputs must be coprime");
        let inv = self.inv(r0[0]);
        let scale = |v: &[u64]| v.iter().map(|&c| self.mul(c, inv)).collect::<Vec<_>>();
        (scale(&s0), scale(&t0))
    }

    fn powmod(self, base: &[u64], exp: &BigUint, modulus: &[u64]) -> Vec<u64> {
        let mut acc = vec![1u64];
        let base = self.poly_rem(base, modulus);
        for i in (0..exp.bits()).rev() {
            acc = self.poly_rem(&self.poly_mul(&acc, &acc), modulus);
            if exp.bit(i) {
                acc = self.poly_rem(&self.poly_mul(&acc, &base), modulus);
            }
        }
        acc
    }

    /// Distinct-degree factorization of a monic squarefree polynomial.
    fn distinct_degree(self, f: &[u64]) -> Vec<(Vec<u64>, usize)> {
        let mut out = Vec::new();
        let mut f = f.to_vec();
        let x = vec![0u64, 1];
        let p = BigUint::from(self.0);
        let mut h = x.clone();
        let mut d = 1;
        while f.len() - 1 >= 2 * d {
            h = self.powmod(&h, &p, &f);
            let g = self.poly_gcd(&self.poly_sub(&h, &x), &f);
            if g.len() > 1 {
                f = self.poly_divrem(&f, &g).0;
                h = self.poly_rem(&h, &f);
                out.push((g, d));
            }
            d += 1;
        }
        if f.len() > 1 {
            let deg = f.len() - 1;
            out.push((f, deg));
        }
        out
    }

    /// Cantor–Zassenhaus splitting of a product of degree-`d` irreducibles.
    fn equal_degree(self, f: &[u64], d: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<u64>> {
        let n = f.len() - 1;
        if n == d {
            return vec![f.to_vec()];
        }
        let exp = (BigUint::from(self.0).pow(d as u32) - 1u32) >> 1;
        loop {
            let mut a: Vec<u64> = (0..n).map(|_| rng.gen_range(0..self.0)).collect();
            Self::trim(&mut a);
            if a.len() < 2 {
                continue;
            }
            let b = self.poly_sub(&self.powmod(&a, &exp, f), &[1]);
            let g = self.poly_gcd(&b, f);
            if g.len() > 1 && g.len() < f.len() {
                let rest = self.poly_divrem(f, &g).0;
                let mut out = self.equal_degree(&g, d, rng);
                out.extend(self.equal_degree(&rest, d, rng));
                return out;
            }
        }
    }
}

fn small_primes() -> impl Iterator<Item = u64> {
    (3u64..).step_by(2).filter(|&n| {
        let mut d = 3;
        while d * d <= n {
            if n % d == 0 {
                return false;
            }
            d += 2;
        }
        true
    })
}

// ---------------------------------------------------------------------------
// Polynomials modulo p^k with BigInt coefficients in [0, p^k).

fn mod_poly(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let mut v: Vec<BigInt> = a.iter().map(|c| c.mod_floor(m)).collect();
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn int_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut v = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            v[i + j] += x * y;
        }
    }
    v
}

fn int_sub(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            a.get(i).cloned().unwrap_or_default() - b.get(i).cloned().unwrap_or_default()
        })
        .collect()
}

fn to_zp(a: &[BigInt], zp: Zp) -> Vec<u64> {
    let mut v: Vec<u64> = a.iter().map(|c| zp.reduce(c)).collect();
    Zp::trim(&mut v);
    v
}

fn from_zp(a: &[u64]) -> Vec<BigInt> {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

/// Lift `f ≡ g0 * h0 (mod p)` to a factorization modulo `p^k`, where `f` is
/// given modulo `p^k`, `g0` is monic and `gcd(g0, h0) = 1` mod `p`.
fn hensel_pair(
    f: &[BigInt],
    g0: &[u64],
    h0: &[u64],
    zp: Zp,
    k: u32,
) -> (Vec<BigInt>, Vec<BigInt>) {
    let p = BigInt::from(zp.0);
    let modulus = p.pow(k);
    let (_, t) = zp.poly_bezout(g0, h0);
    let mut g = from_zp(g0);
    let mut h = from_zp(h0);
    // h carries the true leading coefficient so deg(f - g*h) < deg f.
    *h.last_mut().expect("nonzero") = f.last().expect("nonzero").clone();
    let mut pj = p.clone();
    for _ in 1..k {
        let e = mod_poly(&int_sub(f, &int_mul(&g, &h)), &modulus);
        let e: Vec<BigInt> = e.iter().map(|c| c / &pj).collect();
        let e = to_zp(&e, zp);
        let tau = zp.poly_rem(&zp.poly_mul(&t, &e), g0);
        let sigma = zp
            .poly_divrem(&zp.poly_sub(&e, &zp.poly_mul(&tau, h0)), g0)
            .0;
        for (i, c) in tau.iter().enumerate() {
            g[i] += &pj * BigInt::from(*c);
        }
        for (i, c) in sigma.iter().enumerate() {
            h[i] += &pj * BigInt::from(*c);
        }
        pj *= &p;
    }
    (mod_poly(&g, &modulus), mod_poly(&h, &modulus))
}

/// Lift monic modular factors of `f` (given modulo `p^k`) to monic factors
/// modulo `p^k`.
fn hensel_multi(f: &[BigInt], factors: &[Vec<u64>], zp: Zp, k: u32) -> Vec<Vec<BigInt>> {
    let modulus = BigInt::from(zp.0).pow(k);
    if factors.len() == 1 {
        let lc = f.last().expect("nonzero").clone();
        let inv = lc
            .modinv(&modulus)
            .expect("leading coefficient invertible mod p^k");
        return vec![mod_poly(
            &f.iter().map(|c| c * &inv).collect::<Vec<_>>(),
            &modulus,
        )];
    }
    let mid = factors.len() / 2;
    let g0 = factors[..mid]
        .iter()
        .fold(vec![1u64], |acc, u| zp.poly_mul(&acc, u));
    let fp = to_zp(f, zp);
    let h0 = zp.poly_divrem(&fp, &g0).0;
    let (g, h) = hensel_pair(f, &g0, &h0, zp, k);
    let mut out = hensel_multi(&g, &factors[..mid], zp, k);
    out.extend(hensel_multi(&h, &factors[mid..], zp, k));
    out
}

fn symmetric(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let half = m >> 1;
    a.iter()
        .map(|c| {
            let c = c.mod_floor(m);
            if c > half {
                c - m
            } else {
                c
            }
        })
        .collect()
}

/// Exact quotient over Z, if `g` divides `f`.
fn int_exact_div(f: &[BigInt], g: &[BigInt]) -> Option<Vec<BigInt>> {
    let dg = g.len() - 1;
    let lc = g.last().expect("nonzero");
    let mut r = f.to_vec();
    if r.len() < g.len() {
        return None;
    }
    let mut q = vec![BigInt::zero(); r.len() - dg];
    for k in (0..q.len()).rev() {
        let (c, rem) = r[k + dg].div_rem(lc);
        if !rem.is_zero() {
            return None;
        }
        if c.is_zero() {
            continue;
        }
        for (i, y) in g.iter().enumerate() {
            r[k + i] -= &c * y;
        }
        q[k] = c;
    }
    r.iter().all(Zero::is_zero).then_some(q)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Factor a primitive squarefree integer polynomial of degree at least 2.
fn zassenhaus(f: &[BigInt]) -> Vec<Vec<BigInt>> {
    let n = f.len() - 1;
    let lc = f.last().expect("nonzero").clone();
    let df: Vec<BigInt> = f
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect();

    // Among a handful of good primes, keep the one with the fewest factors.
    let mut best: Option<(Zp, Vec<Vec<u64>>)> = None;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut tried = 0;
    for prime in small_primes() {
        let zp = Zp(prime);
        if zp.reduce(&lc) == 0 {
            continue;
        }
        let fp = to_zp(f, zp);
        if zp.poly_gcd(&fp, &to_zp(&df, zp)).len() != 1 {
            continue;
        }
        let monic = zp.monic(&fp);
        let mut factors = Vec::new();
        for (g, d) in zp.distinct_degree(&monic) {
            factors.extend(zp.equal_degree(&g, d, &mut rng));
        }
        if factors.len() == 1 {
            return vec![f.to_vec()];
        }
        if best.as_ref().map_or(true, |(_, b)| factors.len() < b.len()) {
            best = Some((zp, factors));
        }
        tried += 1;
        if tried >= 5 {
            break;
        }
    }
    let (zp, modular) = best.expect("some prime is always good");

    // Any factor of lc*f has coefficients bounded by |lc| * 2^n * ||f||_1.
    let norm1: BigInt = f.iter().map(|c| c.abs()).sum();
    let bound = lc.abs() * (BigInt::one() << n) * norm1 * 2;
    let p = BigInt::from(zp.0);
    let mut k = 1u32;
    let mut pk = p.clone();
    while pk <= bound {
        pk *= &p;
        k += 1;
    }
    let lifted = hensel_multi(&mod_poly(f, &pk), &modular, zp, k);

    let mut remaining: Vec<Vec<BigInt>> = lifted;
    let mut current = f.to_vec();
    let mut found = Vec::new();
    let mut size = 1;
    while 2 * size <= remaining.len() {
        let mut hit = None;
        for subset in combinations(remaining.len(), size) {
            let lc_cur = current.last().expect("nonzero").clone();
            let product = subset.iter().fold(vec![lc_cur], |acc, &i| {
                mod_poly(&int_mul(&acc, &remaining[i]), &pk)
            });
            let candidate = primitive_part(&symmetric(&product, &pk));
            if let Some(q) = int_exact_div(&current, &candidate) {
                hit = Some((subset, candidate, q));
                break;
            }
        }
        match hit {
            Some((subset, candidate, quotient)) => {
                found.push(candidate);
                current = quotient;
                remaining = remaining
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| !subset.contains(i))
                    .map(|(_, u)| u)
                    .collect();
            }
            None => size += 1,
        }
    }
    if current.len() > 1 {
        found.push(primitive_part(&current));
    }
    found
}

#[cfg(test)]
mod tests {
    use super::*;

    type P = Poly<Rational>;

    fn expand(factors: &[(P, usize)]) -> P {
        factors
            .iter()
            .fold(P::one(), |acc, (f, m)| acc.mul_poly(&f.pow(*m as u32)))
    }

    #[test]
    fn spec_examples() {
        assert_eq!(
            factor(&P::from_ints(&[-1, 0, 1])),
            vec![(P::from_ints(&[-1, 1]), 1), (P::from_ints(&[1, 1]), 1)]
        );
        assert_eq!(factor(&P::from_ints(&[1, 2, 1])), vec![(P::from_ints(&[1, 1]), 2)]);
        assert_eq!(factor(&P::from_ints(&[-2, 0, 1])), vec![(P::from_ints(&[-2, 0, 1]), 1)]);
    }

    #[test]
    fn swinnerton_dyer_like_recombination() {
        // x^4 + 1 is irreducible over Q but splits modulo every prime.
        let p = P::from_ints(&[1, 0, 0, 0, 1]);
        assert!(is_irreducible(&p));
        // (x^4 + 1)(x^2 - 3)(2x + 5)^2
        let q = p
            .mul_poly(&P::from_ints(&[-3, 0, 1]))
            .mul_poly(&P::from_ints(&[5, 2]).pow(2));
        let f = factor(&q);
        assert_eq!(f.len(), 3);
        assert_eq!(expand(&f), q.monic());
    }

    #[test]
    fn rational_coefficients() {
        // (x/2 - 1/3)(x^2 + x + 1)
        let p = P::new(vec![crate::field::ratio(1, 2), crate::field::rat(0)])
            .mul_poly(&P::new(vec![crate::field::ratio(-1, 3), crate::field::ratio(1, 2)]))
            .mul_poly(&P::from_ints(&[1, 1, 1]));
        let f = factor(&p);
        assert_eq!(expand(&f), p.monic());
        assert!(f.iter().all(|(g, _)| is_irreducible(g)));
    }

    #[test]
    fn squarefree_parts() {
        // x^3 (x-1)^2 (x+2)
        let p = P::from_ints(&[0, 0, 0, 1])
            .mul_poly(&P::from_ints(&[-1, 1]).pow(2))
            .mul_poly(&P::from_ints(&[2, 1]));
        let sq = squarefree_decomposition(&p);
        let mults: Vec<usize> = sq.iter().map(|(_, m)| *m).collect();
        assert_eq!(mults, vec![1, 2, 3]);
    }

    #[test]
    fn constants_are_not_irreducible() {
        assert!(!is_irreducible(&P::from_ints(&[5])));
        assert!(factor(&P::from_ints(&[7])).is_empty());
    }
}
