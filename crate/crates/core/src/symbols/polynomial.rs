use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::numerics::SphereNode;

/// Exponent triple `(a, b, c)` of the monomial `x^a y^b z^c`.
pub type Exponents = [u32; 3];

type Terms = BTreeMap<Exponents, Complex64>;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// An unreduced trivariate polynomial in the ambient coordinates.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RawPolynomial {
    terms: Terms,
}

impl RawPolynomial {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Exponents, Complex64)>) -> Self {
        let mut p = Self::new();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, exponents: Exponents, coefficient: Complex64) {
        accumulate(&mut self.terms, exponents, coefficient);
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Complex64)> {
        self.terms.iter()
    }

    pub fn eval(&self, x: f64, y: f64, z: f64) -> Complex64 {
        eval_terms(&self.terms, x, y, z)
    }
}

fn accumulate(terms: &mut Terms, exponents: Exponents, coefficient: Complex64) {
    if coefficient == ZERO {
        return;
    }
    let entry = terms.entry(exponents).or_insert(ZERO);
    *entry += coefficient;
    if *entry == ZERO {
        terms.remove(&exponents);
    }
}

fn eval_terms(terms: &Terms, x: f64, y: f64, z: f64) -> Complex64 {
    terms
        .iter()
        .map(|(&[a, b, c], &coef)| coef * (x.powi(a as i32) * y.powi(b as i32) * z.powi(c as i32)))
        .sum()
}

fn multiply(lhs: &Terms, rhs: &Terms) -> Terms {
    let mut out = Terms::new();
    for (&[a1, b1, c1], &u) in lhs {
        for (&[a2, b2, c2], &v) in rhs {
            accumulate(&mut out, [a1 + a2, b1 + b2, c1 + c2], u * v);
        }
    }
    out
}

fn partial(terms: &Terms, axis: usize) -> Terms {
    let mut out = Terms::new();
    for (&e, &coef) in terms {
        if e[axis] > 0 {
            let mut lowered = e;
            lowered[axis] -= 1;
            accumulate(&mut out, lowered, coef * e[axis] as f64);
        }
    }
    out
}

fn multinomial(k: u32, i: u32, j: u32) -> f64 {
    let fact = |n: u32| (1..=n).map(f64::from).product::<f64>();
    fact(k) / (fact(i) * fact(j) * fact(k - i - j))
}

/// Replaces every `z^c` with `c ≥ 2` by `z^(c mod 2) (1 - x² - y²)^(c div 2)`.
fn reduce_terms(terms: &Terms) -> Terms {
    let mut out = Terms::new();
    for (&[a, b, c], &coef) in terms {
        if c < 2 {
            accumulate(&mut out, [a, b, c], coef);
            continue;
        }
        let k = c / 2;
        for i in 0..=k {
            for j in 0..=(k - i) {
                let l = k - i - j;
                let sign = if (j + l) % 2 == 0 { 1.0 } else { -1.0 };
                accumulate(&mut out, [a + 2 * j, b + 2 * l, c % 2], coef * (sign * multinomial(k, i, j)));
            }
        }
    }
    out
}

/// Canonical representative on the unit sphere of an ambient polynomial.
pub fn reduce(p: &RawPolynomial) -> SphereSymbol {
    SphereSymbol::from_reduced(reduce_terms(&p.terms))
}

/// A polynomial function on the unit sphere in reduced form.
///
/// Every stored monomial `x^a y^b z^c` has `c ≤ 1`; these monomials are
/// linearly independent as functions on the sphere, so two symbols agree as
/// functions exactly when their coefficient maps agree.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SphereSymbol {
    terms: Terms,
    degree_bound: u32,
}

impl SphereSymbol {
    fn from_reduced(terms: Terms) -> Self {
        debug_assert!(terms.keys().all(|e| e[2] <= 1));
        let degree_bound = terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0);
        Self { terms, degree_bound }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(value: Complex64) -> Self {
        let mut terms = Terms::new();
        accumulate(&mut terms, [0, 0, 0], value);
        Self::from_reduced(terms)
    }

    pub fn one() -> Self {
        Self::constant(ONE)
    }

    /// The ambient coordinate `x`, `y` or `z` for `axis` 0, 1, 2.
    pub fn coordinate(axis: usize) -> Self {
        assert!(axis < 3, "axis must be 0, 1 or 2");
        let mut e = [0; 3];
        e[axis] = 1;
        Self::from_reduced(Terms::from([(e, ONE)]))
    }

    pub fn x() -> Self {
        Self::coordinate(0)
    }

    pub fn y() -> Self {
        Self::coordinate(1)
    }

    pub fn z() -> Self {
        Self::coordinate(2)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Complex64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exponents: Exponents) -> Complex64 {
        self.terms.get(&exponents).copied().unwrap_or(ZERO)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Upper bound on the total degree of the stored monomials.
    pub fn degree(&self) -> u32 {
        self.degree_bound
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when every coefficient is real, i.e. the function is real-valued.
    pub fn is_real(&self) -> bool {
        self.terms.values().all(|c| c.im == 0.0)
    }

    /// Euclidean norm of the coefficient vector.
    pub fn coefficient_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn eval(&self, x: f64, y: f64, z: f64) -> Complex64 {
        eval_terms(&self.terms, x, y, z)
    }

    pub fn eval_node(&self, node: &SphereNode) -> Complex64 {
        self.eval(node.x, node.y, node.z)
    }

    pub fn eval_angles(&self, theta: f64, phi: f64) -> Complex64 {
        let (st, ct) = theta.sin_cos();
        self.eval(st * phi.cos(), st * phi.sin(), ct)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (&e, &c) in &other.terms {
            accumulate(&mut terms, e, c);
        }
        Self::from_reduced(terms)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-ONE))
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let mut terms = Terms::new();
        for (&e, &c) in &self.terms {
            accumulate(&mut terms, e, c * factor);
        }
        Self::from_reduced(terms)
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    pub fn conj(&self) -> Self {
        Self::from_reduced(self.terms.iter().map(|(&e, c)| (e, c.conj())).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::from_reduced(reduce_terms(&multiply(&self.terms, &other.terms)))
    }

    pub fn pow(&self, exponent: u32) -> Self {
        (0..exponent).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Ambient partial derivative of the stored representative.
    fn gradient(&self) -> [Terms; 3] {
        [partial(&self.terms, 0), partial(&self.terms, 1), partial(&self.terms, 2)]
    }

    /// `{f, g} = n · (∇F × ∇G)` with `n = (x, y, z)`, so `{x, y} = z`.
    pub fn poisson_bracket(&self, other: &Self) -> Self {
        let [fx, fy, fz] = self.gradient();
        let [gx, gy, gz] = other.gradient();
        let mut cross = [Terms::new(), Terms::new(), Terms::new()];
        let pairs = [((&fy, &gz), (&fz, &gy)), ((&fz, &gx), (&fx, &gz)), ((&fx, &gy), (&fy, &gx))];
        for (k, ((a1, b1), (a2, b2))) in pairs.into_iter().enumerate() {
            for (e, c) in multiply(a1, b1) {
                accumulate(&mut cross[k], e, c);
            }
            for (e, c) in multiply(a2, b2) {
                accumulate(&mut cross[k], e, -c);
            }
        }
        let mut out = Terms::new();
        for (axis, component) in cross.iter().enumerate() {
            for (&e, &c) in component {
                let mut raised = e;
                raised[axis] += 1;
                accumulate(&mut out, raised, c);
            }
        }
        Self::from_reduced(reduce_terms(&out))
    }

    /// Positive Laplace-Beltrami operator `-Σ_k {X_k, {X_k, f}}`.
    ///
    /// Its eigenvalue on degree-`ℓ` spherical harmonics is `ℓ(ℓ+1)`.
    pub fn laplace_beltrami(&self) -> Self {
        let mut sum = Self::zero();
        for axis in 0..3 {
            let coord = Self::coordinate(axis);
            sum = sum.add(&coord.poisson_bracket(&coord.poisson_bracket(self)));
        }
        sum.scale(-ONE)
    }
}

impl fmt::Display for SphereSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&[a, b, c], coef) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({coef})")?;
            for (name, power) in [("x", a), ("y", b), ("z", c)] {
                match power {
                    0 => {}
                    1 => write!(f, "{name}")?,
                    p => write!(f, "{name}^{p}")?,
                }
            }
        }
        Ok(())
    }
}
