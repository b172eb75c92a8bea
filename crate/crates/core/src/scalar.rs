//! Scalars for the convolution and matrix algebras.
//!
//! Algebra code is generic over [`Scalar`]: [`num_complex::Complex64`] for
//! the numeric path and [`Cyclotomic`] for exact arithmetic in `Z[zeta_n]`
//! (every coefficient built from character values and integer data lives
//! there, so identities like multiplicativity of the Fourier transform can
//! be checked with `==`).

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::rc::Rc;

use num_complex::Complex64;

use crate::group::{lcm, RootOfUnity};

pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + 'static
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_root(r: RootOfUnity) -> Self;
    fn from_int(k: i64) -> Self;
    fn conj(&self) -> Self;
    fn to_complex(&self) -> Complex64;
    /// Exact equality for exact scalars; `|a - b| <= tol` otherwise.
    fn approx_eq(&self, other: &Self, tol: f64) -> bool;
    fn is_zero(&self) -> bool;
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_root(r: RootOfUnity) -> Self {
        r.to_complex()
    }
    fn from_int(k: i64) -> Self {
        Complex64::new(k as f64, 0.0)
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn to_complex(&self) -> Complex64 {
        *self
    }
    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self - other).norm() <= tol
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
}

thread_local! {
    static CYCLOTOMIC_POLYS: RefCell<HashMap<u64, Rc<Vec<i64>>>> = RefCell::new(HashMap::new());
}

/// Coefficients (low degree first) of the `n`-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(n: u64) -> Rc<Vec<i64>> {
    assert!(n > 0);
    if let Some(p) = CYCLOTOMIC_POLYS.with(|c| c.borrow().get(&n).cloned()) {
        return p;
    }
    // x^n - 1 divided by every Phi_d with d | n, d < n
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let div = cyclotomic_polynomial(d);
            num = exact_div(&num, &div);
        }
    }
    let rc = Rc::new(num);
    CYCLOTOMIC_POLYS.with(|c| c.borrow_mut().insert(n, rc.clone()));
    rc
}

fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    debug_assert_eq!(den[dn], 1);
    let mut rem = num.to_vec();
    let qlen = num.len() - dn;
    let mut q = vec![0i64; qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + dn];
        q[k] = c;
        for (i, &d) in den.iter().enumerate() {
            rem[k + i] -= c * d;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

/// An element of `Z[zeta_n]`, stored as its canonical remainder modulo the
/// `n`-th cyclotomic polynomial.
#[derive(Clone)]
pub struct Cyclotomic {
    n: u64,
    coeffs: Vec<i64>,
}

impl Cyclotomic {
    fn reduce(n: u64, mut poly: Vec<i64>) -> Cyclotomic {
        // fold exponents mod n first (Phi_n divides x^n - 1)
        if poly.len() > n as usize {
            for k in n as usize..poly.len() {
                let c = poly[k];
                poly[k % n as usize] += c;
            }
            poly.truncate(n as usize);
        }
        let phi = cyclotomic_polynomial(n);
        let deg = phi.len() - 1;
        for top in (deg..poly.len()).rev() {
            let c = poly[top];
            if c != 0 {
                for (i, &p) in phi.iter().enumerate() {
                    poly[top - deg + i] -= c * p;
                }
            }
        }
        poly.resize(deg, 0);
        Cyclotomic { n, coeffs: poly }
    }

    pub fn conductor(&self) -> u64 {
        self.n
    }

    fn lift(&self, m: u64) -> Cyclotomic {
        if m == self.n {
            return self.clone();
        }
        debug_assert_eq!(m % self.n, 0);
        let step = (m / self.n) as usize;
        let mut poly = vec![0i64; m as usize];
        for (k, &c) in self.coeffs.iter().enumerate() {
            poly[(k * step) % m as usize] += c;
        }
        Cyclotomic::reduce(m, poly)
    }

    fn common(&self, other: &Cyclotomic) -> (Cyclotomic, Cyclotomic) {
        let m = lcm(self.n, other.n);
        (self.lift(m), other.lift(m))
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclotomic[{}]{:?}", self.n, self.coeffs)
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = self.common(other);
        a.coeffs == b.coeffs
    }
}

impl Add for Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: Cyclotomic) -> Cyclotomic {
        let (mut a, b) = self.common(&rhs);
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x += y;
        }
        a
    }
}

impl AddAssign for Cyclotomic {
    fn add_assign(&mut self, rhs: Cyclotomic) {
        *self = self.clone() + rhs;
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(mut self) -> Cyclotomic {
        for c in &mut self.coeffs {
            *c = -*c;
        }
        self
    }
}

impl Sub for Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: Cyclotomic) -> Cyclotomic {
        self + (-rhs)
    }
}

impl Mul for Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: Cyclotomic) -> Cyclotomic {
        let (a, b) = self.common(&rhs);
        if a.coeffs.iter().all(|&c| c == 0) || b.coeffs.iter().all(|&c| c == 0) {
            return Cyclotomic::reduce(a.n, Vec::new());
        }
        let mut prod = vec![0i64; a.coeffs.len() + b.coeffs.len()];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                prod[i + j] += x * y;
            }
        }
        Cyclotomic::reduce(a.n, prod)
    }
}

impl Scalar for Cyclotomic {
    fn zero() -> Self {
        Cyclotomic { n: 1, coeffs: vec![0] }
    }
    fn one() -> Self {
        Cyclotomic { n: 1, coeffs: vec![1] }
    }
    fn from_root(r: RootOfUnity) -> Self {
        let n = r.denominator();
        let mut poly = vec![0i64; n as usize];
        poly[r.numerator() as usize] = 1;
        Cyclotomic::reduce(n, poly)
    }
    fn from_int(k: i64) -> Self {
        Cyclotomic { n: 1, coeffs: vec![k] }
    }
    fn conj(&self) -> Self {
        let n = self.n as usize;
        let mut poly = vec![0i64; n];
        for (k, &c) in self.coeffs.iter().enumerate() {
            poly[(n - k) % n] += c;
        }
        Cyclotomic::reduce(self.n, poly)
    }
    fn to_complex(&self) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| RootOfUnity::new(k as i64, self.n).to_complex() * c as f64)
            .sum()
    }
    fn approx_eq(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}
