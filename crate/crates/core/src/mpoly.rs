//! Exact multivariate polynomials over the rationals in the variables x, y, z.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{Ring, Q};
use crate::upoly::{self, UPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Var {
    X,
    Y,
    Z,
}

impl Var {
    pub const ALL: [Var; 3] = [Var::X, Var::Y, Var::Z];

    pub fn idx(self) -> usize {
        self as usize
    }

    pub fn from_idx(i: usize) -> Var {
        Var::ALL[i]
    }

    pub fn name(self) -> &'static str {
        ["x", "y", "z"][self.idx()]
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Var {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "x" => Ok(Var::X),
            "y" => Ok(Var::Y),
            "z" => Ok(Var::Z),
            _ => Err(format!("unknown variable {s:?}")),
        }
    }
}

/// Exponent vector `(e_x, e_y, e_z)`, ordered graded-lexicographically with
/// x < y < z.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Mono(pub [u32; 3]);

impl Mono {
    pub const ONE: Mono = Mono([0, 0, 0]);

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, o: &Mono) -> Mono {
        Mono([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }

    fn divides(&self, o: &Mono) -> bool {
        (0..3).all(|i| self.0[i] <= o.0[i])
    }

    fn div(&self, o: &Mono) -> Mono {
        Mono([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl Ord for Mono {
    fn cmp(&self, o: &Self) -> Ordering {
        self.total()
            .cmp(&o.total())
            .then(self.0[2].cmp(&o.0[2]))
            .then(self.0[1].cmp(&o.0[1]))
            .then(self.0[0].cmp(&o.0[0]))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

#[derive(Clone, PartialEq, Eq, Default)]
pub struct MPoly {
    terms: BTreeMap<Mono, Q>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        MPoly::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Mono::ONE, c);
        }
        MPoly { terms }
    }

    pub fn int(n: i64) -> Self {
        MPoly::constant(Q::from_integer(BigInt::from(n)))
    }

    pub fn var(v: Var) -> Self {
        let mut e = [0; 3];
        e[v.idx()] = 1;
        MPoly::term(Q::one(), e)
    }

    pub fn term(c: Q, e: [u32; 3]) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Mono(e), c);
        }
        MPoly { terms }
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Mono, Q)>) -> Self {
        let mut p = MPoly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Mono, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| *m == Mono::ONE)
    }

    pub fn constant_value(&self) -> Option<Q> {
        if self.is_zero() {
            Some(Q::zero())
        } else if self.is_constant() {
            self.terms.get(&Mono::ONE).cloned()
        } else {
            None
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.total()).max().unwrap_or(0)
    }

    pub fn degree(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.0[v.idx()]).max().unwrap_or(0)
    }

    pub fn involves(&self, v: Var) -> bool {
        self.degree(v) > 0
    }

    /// Variables that occur, in increasing order.
    pub fn vars(&self) -> Vec<Var> {
        Var::ALL.into_iter().filter(|&v| self.involves(v)).collect()
    }

    /// Leading term under the graded-lex order.
    pub fn leading_term(&self) -> Option<(&Mono, &Q)> {
        self.terms.iter().next_back()
    }

    pub fn add(&self, o: &MPoly) -> MPoly {
        let (mut big, small) = if self.terms.len() >= o.terms.len() { (self.clone(), o) } else { (o.clone(), self) };
        for (m, c) in &small.terms {
            big.add_term(*m, c.clone());
        }
        big
    }

    pub fn neg(&self) -> MPoly {
        MPoly { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }

    pub fn sub(&self, o: &MPoly) -> MPoly {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(*m, -c);
        }
        r
    }

    pub fn mul(&self, o: &MPoly) -> MPoly {
        let mut r = MPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                r.add_term(ma.mul(mb), ca * cb);
            }
        }
        r
    }

    pub fn scale(&self, k: &Q) -> MPoly {
        if k.is_zero() {
            return MPoly::zero();
        }
        MPoly { terms: self.terms.iter().map(|(m, c)| (*m, c * k)).collect() }
    }

    pub fn pow(&self, e: u32) -> MPoly {
        Ring::pow(self, e)
    }

    pub fn differentiate(&self, v: Var) -> MPoly {
        let i = v.idx();
        MPoly::from_terms(self.terms.iter().filter(|(m, _)| m.0[i] > 0).map(|(m, c)| {
            let mut e = m.0;
            let k = e[i];
            e[i] -= 1;
            (Mono(e), c * Q::from_integer(BigInt::from(k)))
        }))
    }

    pub fn substitute(&self, v: Var, value: &Q) -> MPoly {
        let i = v.idx();
        let mut powers: Vec<Q> = vec![Q::one()];
        MPoly::from_terms(
            self.terms
                .iter()
                .map(|(m, c)| {
                    let k = m.0[i] as usize;
                    while powers.len() <= k {
                        let next = powers.last().unwrap() * value;
                        powers.push(next);
                    }
                    let mut e = m.0;
                    e[i] = 0;
                    (Mono(e), c * &powers[k])
                })
                .collect::<Vec<_>>(),
        )
    }

    pub fn eval(&self, point: &[Q; 3]) -> Q {
        let mut acc = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for i in 0..3 {
                for _ in 0..m.0[i] {
                    t *= &point[i];
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_f64(&self, point: [f64; 3]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                crate::ring::q_to_f64(c)
                    * point[0].powi(m.0[0] as i32)
                    * point[1].powi(m.0[1] as i32)
                    * point[2].powi(m.0[2] as i32)
            })
            .sum()
    }

    /// View as a univariate polynomial in `v` with coefficients free of `v`.
    pub fn coeffs_in(&self, v: Var) -> UPoly<MPoly> {
        let i = v.idx();
        let d = self.degree(v) as usize;
        let mut cs = vec![MPoly::zero(); d + 1];
        for (m, c) in &self.terms {
            let k = m.0[i] as usize;
            let mut e = m.0;
            e[i] = 0;
            cs[k].add_term(Mono(e), c.clone());
        }
        UPoly::new(cs)
    }

    pub fn from_coeffs_in(v: Var, p: &UPoly<MPoly>) -> MPoly {
        let i = v.idx();
        let mut r = MPoly::zero();
        for (k, c) in p.coeffs().iter().enumerate() {
            for (m, q) in &c.terms {
                let mut e = m.0;
                e[i] += k as u32;
                r.add_term(Mono(e), q.clone());
            }
        }
        r
    }

    /// Coefficient of `v^deg_v(p)`, a polynomial in the other variables.
    pub fn leading_coefficient(&self, v: Var) -> MPoly {
        if self.degree(v) == 0 {
            return self.clone();
        }
        self.coeffs_in(v).lc()
    }

    /// Univariate view when `self` involves no variable other than `v`.
    pub fn to_univariate(&self, v: Var) -> Option<UPoly<Q>> {
        if self.vars().iter().any(|&w| w != v) {
            return None;
        }
        let d = self.degree(v) as usize;
        let mut cs = vec![Q::zero(); d + 1];
        for (m, c) in &self.terms {
            cs[m.0[v.idx()] as usize] = c.clone();
        }
        Some(UPoly::new(cs))
    }

    pub fn from_univariate(v: Var, p: &UPoly<Q>) -> MPoly {
        let mut r = MPoly::zero();
        for (k, c) in p.coeffs().iter().enumerate() {
            let mut e = [0; 3];
            e[v.idx()] = k as u32;
            r.add_term(Mono(e), c.clone());
        }
        r
    }

    /// Substitutes polynomials for all three variables at once.
    pub fn compose(&self, images: &[MPoly; 3]) -> MPoly {
        let mut cache: [Vec<MPoly>; 3] = [vec![MPoly::one()], vec![MPoly::one()], vec![MPoly::one()]];
        let mut r = MPoly::zero();
        for (m, c) in &self.terms {
            let mut t = MPoly::constant(c.clone());
            for i in 0..3 {
                let k = m.0[i] as usize;
                while cache[i].len() <= k {
                    let next = cache[i].last().unwrap().mul(&images[i]);
                    cache[i].push(next);
                }
                if k > 0 {
                    t = t.mul(&cache[i][k]);
                }
            }
            r = r.add(&t);
        }
        r
    }

    /// Renames variables: variable `i` becomes `perm[i]`.
    pub fn permute(&self, perm: [Var; 3]) -> MPoly {
        MPoly::from_terms(self.terms.iter().map(|(m, c)| {
            let mut e = [0; 3];
            for i in 0..3 {
                e[perm[i].idx()] = m.0[i];
            }
            (Mono(e), c.clone())
        }))
    }

    /// Integer content 1 and positive leading coefficient.
    pub fn normalize(&self) -> MPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut den: BigInt = num_traits::One::one();
        let mut num: BigInt = num_traits::Zero::zero();
        for c in self.terms.values() {
            den = den.lcm(c.denom());
            num = num.gcd(c.numer());
        }
        let mut k = Q::new(den, num);
        if self.leading_term().unwrap().1.is_negative() {
            k = -k;
        }
        self.scale(&k)
    }

    /// Graded-lex division; `None` when the division is not exact.
    pub fn try_div(&self, d: &MPoly) -> Option<MPoly> {
        let (dm, dc) = d.leading_term().expect("division by zero polynomial");
        let (dm, dc) = (*dm, dc.clone());
        let mut rem = self.clone();
        let mut quot = MPoly::zero();
        while let Some((rm, rc)) = rem.leading_term() {
            if !dm.divides(rm) {
                return None;
            }
            let m = rm.div(&dm);
            let c = rc / &dc;
            for (tm, tc) in &d.terms {
                rem.add_term(tm.mul(&m), -(tc * &c));
            }
            quot.add_term(m, c);
        }
        Some(quot)
    }

    pub fn divides(&self, p: &MPoly) -> bool {
        p.try_div(self).is_some()
    }

    /// Sylvester resultant eliminating `v`.
    pub fn resultant(&self, other: &MPoly, v: Var) -> Result<MPoly> {
        if self.degree(v) == 0 && other.degree(v) == 0 {
            return Err(Error::BothConstantInV(v));
        }
        Ok(upoly::resultant(&self.coeffs_in(v), &other.coeffs_in(v)))
    }

    /// `Res_v(p, dp/dv)` without leading-coefficient normalisation.
    pub fn discriminant(&self, v: Var) -> Result<MPoly> {
        if self.degree(v) == 0 {
            return Err(Error::ConstantInV(v));
        }
        self.resultant(&self.differentiate(v), v)
    }

    /// The highest variable present, in the order z > y > x.
    fn main_var(&self) -> Option<Var> {
        Var::ALL.into_iter().rev().find(|&v| self.involves(v))
    }

    /// Gcd of the coefficients with respect to `v`.
    pub fn content_in(&self, v: Var) -> MPoly {
        let cs = self.coeffs_in(v);
        let mut g = MPoly::zero();
        for c in cs.coeffs() {
            g = g.gcd(c);
            if g.is_constant() && !g.is_zero() {
                return MPoly::one();
            }
        }
        g
    }

    /// Normalised greatest common divisor.
    pub fn gcd(&self, other: &MPoly) -> MPoly {
        if self.is_zero() {
            return other.normalize();
        }
        if other.is_zero() {
            return self.normalize();
        }
        if self.is_constant() || other.is_constant() {
            return MPoly::one();
        }
        let v = match (self.main_var(), other.main_var()) {
            (Some(a), Some(b)) => a.max(b),
            _ => unreachable!(),
        };
        if !self.involves(v) {
            return self.gcd(&other.content_in(v));
        }
        if !other.involves(v) {
            return other.gcd(&self.content_in(v));
        }
        let ca = self.content_in(v);
        let cb = other.content_in(v);
        let c = ca.gcd(&cb);
        let mut f = primitive_in(&self.try_div(&ca).unwrap(), v);
        let mut g = primitive_in(&other.try_div(&cb).unwrap(), v);
        if f.deg() < g.deg() {
            std::mem::swap(&mut f, &mut g);
        }
        loop {
            let r = f.prem(&g);
            if r.is_zero() {
                break;
            }
            if r.deg() == 0 {
                return c.normalize();
            }
            f = g;
            g = primitive_in(&MPoly::from_coeffs_in(v, &r), v);
        }
        let g = MPoly::from_coeffs_in(v, &g);
        let g = g.try_div(&g.content_in(v)).unwrap();
        c.mul(&g).normalize()
    }

    /// Product of the distinct irreducible factors, normalised.
    pub fn squarefree_part(&self) -> Result<MPoly> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(self.squarefree_inner())
    }

    fn squarefree_inner(&self) -> MPoly {
        let Some(v) = self.main_var() else { return MPoly::one() };
        let c = self.content_in(v);
        let pp = self.try_div(&c).unwrap();
        let g = pp.gcd(&pp.differentiate(v));
        let s = pp.try_div(&g).unwrap();
        c.squarefree_inner().mul(&s).normalize()
    }

    /// `p(m·(x, y, z))`.
    pub fn apply_linear_map(&self, m: &LinearMap3) -> Result<MPoly> {
        if m.determinant().is_zero() {
            return Err(Error::SingularMap);
        }
        let images: [MPoly; 3] = std::array::from_fn(|i| {
            let mut r = MPoly::zero();
            for j in 0..3 {
                r = r.add(&MPoly::var(Var::from_idx(j)).scale(&m.matrix[i][j]));
            }
            r
        });
        Ok(self.compose(&images))
    }
}

fn primitive_in(p: &MPoly, v: Var) -> UPoly<MPoly> {
    let c = p.content_in(v);
    let q = if c.is_constant() { p.normalize() } else { p.try_div(&c).unwrap().normalize() };
    q.coeffs_in(v)
}

impl Ring for MPoly {
    fn zero() -> Self {
        MPoly::zero()
    }
    fn one() -> Self {
        MPoly::one()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, o: &Self) -> Self {
        MPoly::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        MPoly::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        MPoly::mul(self, o)
    }
    fn neg(&self) -> Self {
        MPoly::neg(self)
    }
    fn exact_div(&self, o: &Self) -> Self {
        self.try_div(o).expect("inexact multivariate division")
    }
    fn from_i64(n: i64) -> Self {
        MPoly::int(n)
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

pub fn fmt_q(c: &Q) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Canonical text form, accepted back by the expression parser.
impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let mut factors = Vec::new();
            if *m == Mono::ONE || !a.is_one() {
                factors.push(fmt_q(&a));
            }
            for v in Var::ALL {
                match m.0[v.idx()] {
                    0 => {}
                    1 => factors.push(v.name().to_string()),
                    e => factors.push(format!("{}^{}", v.name(), e)),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

impl Serialize for MPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Invertible linear substitution `(x, y, z) <- matrix·(x, y, z)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap3 {
    pub matrix: [[Q; 3]; 3],
}

impl LinearMap3 {
    pub fn identity() -> Self {
        let z = Q::zero;
        let o = Q::one;
        LinearMap3 { matrix: [[o(), z(), z()], [z(), o(), z()], [z(), z(), o()]] }
    }

    pub fn new(matrix: [[Q; 3]; 3]) -> Result<Self> {
        let m = LinearMap3 { matrix };
        if m.determinant().is_zero() {
            return Err(Error::SingularMap);
        }
        Ok(m)
    }

    pub fn is_identity(&self) -> bool {
        *self == LinearMap3::identity()
    }

    pub fn determinant(&self) -> Q {
        let a = &self.matrix;
        &a[0][0] * (&a[1][1] * &a[2][2] - &a[1][2] * &a[2][1]) - &a[0][1] * (&a[1][0] * &a[2][2] - &a[1][2] * &a[2][0])
            + &a[0][2] * (&a[1][0] * &a[2][1] - &a[1][1] * &a[2][0])
    }

    pub fn inverse(&self) -> Result<Self> {
        let d = self.determinant();
        if d.is_zero() {
            return Err(Error::SingularMap);
        }
        let a = &self.matrix;
        let cof = |r0: usize, r1: usize, c0: usize, c1: usize| &a[r0][c0] * &a[r1][c1] - &a[r0][c1] * &a[r1][c0];
        let m = [
            [cof(1, 2, 1, 2), -cof(0, 2, 1, 2), cof(0, 1, 1, 2)],
            [-cof(1, 2, 0, 2), cof(0, 2, 0, 2), -cof(0, 1, 0, 2)],
            [cof(1, 2, 0, 1), -cof(0, 2, 0, 1), cof(0, 1, 0, 1)],
        ];
        Ok(LinearMap3 { matrix: m.map(|row| row.map(|v| v / &d)) })
    }

    /// `self ∘ other` as substitutions: applying the result equals applying
    /// `self` first and then `other`.
    pub fn then(&self, other: &LinearMap3) -> LinearMap3 {
        // p(A v) then q(v) = p(A B v)
        let a = &self.matrix;
        let b = &other.matrix;
        let m: [[Q; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| (0..3).map(|k| &a[i][k] * &b[k][j]).sum()));
        LinearMap3 { matrix: m }
    }

    /// Image of a point under the matrix.
    pub fn apply_point(&self, p: [f64; 3]) -> [f64; 3] {
        std::array::from_fn(|i| (0..3).map(|j| crate::ring::q_to_f64(&self.matrix[i][j]) * p[j]).sum())
    }

    /// Rotation about the given axis by the angle with rational cosine `c`
    /// and sine `s` (`c² + s² = 1`).
    pub fn rotation(axis: Var, c: Q, s: Q) -> LinearMap3 {
        let mut m = LinearMap3::identity().matrix;
        let (i, j) = match axis {
            Var::X => (1, 2),
            Var::Y => (2, 0),
            Var::Z => (0, 1),
        };
        m[i][i] = c.clone();
        m[i][j] = -s.clone();
        m[j][i] = s;
        m[j][j] = c;
        LinearMap3 { matrix: m }
    }

    pub fn to_f64(&self) -> [[f64; 3]; 3] {
        self.matrix.clone().map(|r| r.map(|v| crate::ring::q_to_f64(&v)))
    }
}

impl Serialize for LinearMap3 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self.matrix.iter().map(|r| r.iter().map(fmt_q).collect()).collect();
        rows.serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{q, qi};

    fn x() -> MPoly {
        MPoly::var(Var::X)
    }
    fn y() -> MPoly {
        MPoly::var(Var::Y)
    }
    fn z() -> MPoly {
        MPoly::var(Var::Z)
    }
    fn c(n: i64) -> MPoly {
        MPoly::int(n)
    }

    fn s1() -> MPoly {
        let sq = |v: MPoly| v.pow(2).sub(&c(1)).pow(2);
        sq(x()).add(&sq(y())).add(&sq(z())).sub(&MPoly::constant(q(3, 2)))
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(x().add(&y()).add(&x().sub(&y())), x().scale(&qi(2)));
        let circ = x().pow(2).add(&y().pow(2)).sub(&c(1));
        let sq = circ.mul(&circ);
        let expect = x().pow(4).add(&x().pow(2).mul(&y().pow(2)).scale(&qi(2))).add(&y().pow(4))
            .sub(&x().pow(2).scale(&qi(2))).sub(&y().pow(2).scale(&qi(2))).add(&c(1));
        assert_eq!(sq, expect);
        assert!(MPoly::zero().mul(&z().pow(5).sub(&c(3))).is_zero());
    }

    #[test]
    fn differentiate_examples() {
        let f = x().pow(2).sub(&y().pow(2).mul(&z()));
        assert_eq!(f.differentiate(Var::Y), y().mul(&z()).scale(&qi(-2)));
        assert!(c(5).differentiate(Var::X).is_zero());
        let s5 = x().pow(2).add(&y().pow(2)).add(&z().pow(2)).add(&x().mul(&y()).mul(&z()).scale(&qi(2))).sub(&c(1));
        assert_eq!(s5.differentiate(Var::Z), z().scale(&qi(2)).add(&x().mul(&y()).scale(&qi(2))));
    }

    #[test]
    fn substitute_examples() {
        let slice = s1().substitute(Var::Z, &q(-7, 5));
        let sq = |v: MPoly| v.pow(2).sub(&c(1)).pow(2);
        assert_eq!(slice, sq(x()).add(&sq(y())).sub(&MPoly::constant(q(723, 1250))));
        let w = x().pow(2).sub(&y().pow(2).mul(&z()));
        assert_eq!(w.substitute(Var::Z, &qi(0)), x().pow(2));
        let s5 = x().pow(2).add(&y().pow(2)).add(&z().pow(2)).add(&x().mul(&y()).mul(&z()).scale(&qi(2))).sub(&c(1));
        assert_eq!(s5.substitute(Var::Z, &qi(1)), x().add(&y()).pow(2));
    }

    #[test]
    fn leading_coefficient_examples() {
        let w = x().pow(2).sub(&y().pow(2).mul(&z()));
        assert_eq!(w.leading_coefficient(Var::Y), z().neg());
        let s5 = x().pow(2).add(&y().pow(2)).add(&z().pow(2)).add(&x().mul(&y()).mul(&z()).scale(&qi(2))).sub(&c(1));
        assert_eq!(s5.leading_coefficient(Var::X), c(1));
        let p = y().pow(2).sub(&c(3));
        assert_eq!(p.leading_coefficient(Var::Z), p);
    }

    #[test]
    fn resultant_examples() {
        let r = y().pow(2).sub(&x()).resultant(&y().sub(&c(1)), Var::Y).unwrap();
        assert_eq!(r, c(1).sub(&x()));
        let w = x().pow(2).sub(&y().pow(2).mul(&z()));
        let r = w.resultant(&y().mul(&z()).scale(&qi(-2)), Var::Y).unwrap();
        assert_eq!(r, x().pow(2).mul(&z().pow(2)).scale(&qi(4)));
        assert!(y().resultant(&y(), Var::Y).unwrap().is_zero());
        assert_eq!(x().resultant(&z(), Var::Y), Err(Error::BothConstantInV(Var::Y)));
    }

    #[test]
    fn discriminant_examples() {
        let w = x().pow(2).sub(&y().pow(2).mul(&z()));
        assert_eq!(w.discriminant(Var::Y).unwrap(), x().pow(2).mul(&z().pow(2)).scale(&qi(4)));
        assert_eq!(y().pow(2).add(&x()).discriminant(Var::Y).unwrap(), x().scale(&qi(4)));
        assert_eq!(x().mul(&z()).discriminant(Var::X).unwrap(), z());
        assert_eq!(z().discriminant(Var::X), Err(Error::ConstantInV(Var::X)));
    }

    #[test]
    fn squarefree_examples() {
        let p = x().pow(2).mul(&z().pow(2)).scale(&qi(4));
        assert_eq!(p.squarefree_part().unwrap(), x().mul(&z()));
        let circ = x().pow(2).add(&y().pow(2)).sub(&c(1));
        assert_eq!(circ.pow(2).squarefree_part().unwrap(), circ);
        assert_eq!(x().squarefree_part().unwrap(), x());
        assert_eq!(MPoly::zero().squarefree_part(), Err(Error::ZeroPolynomial));
        // repeated factor free of the main variable
        let p = x().sub(&c(1)).pow(3).mul(&z().add(&y()));
        assert_eq!(p.squarefree_part().unwrap(), x().sub(&c(1)).mul(&z().add(&y())).normalize());
    }

    #[test]
    fn gcd_multivariate() {
        let a = x().add(&y()).mul(&z().sub(&x()));
        let b = x().add(&y()).mul(&z().add(&c(2)));
        assert_eq!(a.gcd(&b), x().add(&y()));
        assert_eq!(x().gcd(&y()), c(1));
    }

    #[test]
    fn linear_map_examples() {
        let m = LinearMap3::new([
            [q(3, 5), q(-4, 5), qi(0)],
            [q(4, 5), q(3, 5), qi(0)],
            [qi(0), qi(0), qi(1)],
        ])
        .unwrap();
        let r = x().pow(2).apply_linear_map(&m).unwrap();
        let expect = x().pow(2).scale(&q(9, 25)).sub(&x().mul(&y()).scale(&q(24, 25))).add(&y().pow(2).scale(&q(16, 25)));
        assert_eq!(r, expect);
        let sph = x().pow(2).add(&y().pow(2)).add(&z().pow(2)).sub(&c(1));
        assert_eq!(sph.apply_linear_map(&m).unwrap(), sph);
        assert_eq!(s1().apply_linear_map(&LinearMap3::identity()).unwrap(), s1());
        let sing = LinearMap3 { matrix: [[qi(1), qi(1), qi(0)], [qi(1), qi(1), qi(0)], [qi(0), qi(0), qi(1)]] };
        assert_eq!(x().apply_linear_map(&sing), Err(Error::SingularMap));
        let back = r.apply_linear_map(&m.inverse().unwrap()).unwrap();
        assert_eq!(back, x().pow(2));
    }

    #[test]
    fn display_is_canonical() {
        let p = x().pow(2).sub(&y().mul(&z()).scale(&q(3, 2))).add(&c(1));
        assert_eq!(p.to_string(), "-3/2*y*z + x^2 + 1");
        assert_eq!(MPoly::zero().to_string(), "0");
    }
}
