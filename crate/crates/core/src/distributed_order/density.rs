use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad::integrate;
use crate::specfun::{cos_pi, sin_pi};

/// Tolerance on `Σ w_j + ∫ c = 1`.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// One point mass `w δ(β − β_j)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub beta: f64,
    pub weight: f64,
}

/// Declared regularity of a continuous order density.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Smoothness {
    /// Bounded and piecewise continuous; the minimum the evaluators rely on.
    PiecewiseContinuous,
    Smooth,
}

/// Continuous part `c(β)` of an order density on `[0, 1]`.
#[derive(Clone)]
pub enum ContinuousPart {
    /// `c(β) = level`.
    Uniform { level: f64 },
    /// A bounded callable with `0 ≤ c(β) ≤ bound`.
    Function { c: Arc<dyn Fn(f64) -> f64 + Send + Sync>, bound: f64, smoothness: Smoothness, label: String },
}

impl fmt::Debug for ContinuousPart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Uniform { level } => f.debug_struct("Uniform").field("level", level).finish(),
            Self::Function { bound, smoothness, label, .. } => f
                .debug_struct("Function")
                .field("label", label)
                .field("bound", bound)
                .field("smoothness", smoothness)
                .finish(),
        }
    }
}

impl ContinuousPart {
    pub fn eval(&self, beta: f64) -> f64 {
        match self {
            Self::Uniform { level } => *level,
            Self::Function { c, .. } => c(beta),
        }
    }

    fn mass(&self) -> Result<f64> {
        match self {
            Self::Uniform { level } => Ok(*level),
            Self::Function { c, .. } => {
                let r = integrate(|b| Ok(c(b)), 0.0, 1.0, 1e-13, 1e-13, 400)?;
                if !r.converged {
                    return Err(Error::Quadrature {
                        what: "mass of the continuous order density".into(),
                        estimate: r.abs_error,
                        tol: 1e-13,
                    });
                }
                Ok(r.value)
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Self::Uniform { level } => {
                if !(*level > 0.0 && level.is_finite()) {
                    return Err(Error::InvalidDensity(format!("uniform level {level} must be positive")));
                }
            }
            Self::Function { c, bound, label, .. } => {
                if !(*bound > 0.0 && bound.is_finite()) {
                    return Err(Error::InvalidDensity(format!("{label}: bound {bound} must be finite")));
                }
                for i in 0..=256 {
                    let b = i as f64 / 256.0;
                    let v = c(b);
                    if !(v >= 0.0 && v <= *bound) {
                        return Err(Error::InvalidDensity(format!("{label}: c({b}) = {v} outside [0, {bound}]")));
                    }
                }
            }
        }
        Ok(())
    }
}

/// An order density `b(β) = Σ w_j δ(β − β_j) + c(β)` on `(0, 1]`.
///
/// Construction validates positivity, ordering and normalization, so every
/// instance is admissible up to the per-evaluation check of the branch-cut
/// argument.
#[derive(Debug, Clone)]
pub struct OrderDensity {
    atoms: Vec<Atom>,
    continuous: Option<ContinuousPart>,
}

impl OrderDensity {
    /// Atoms are sorted by location; duplicates are rejected.
    pub fn new(mut atoms: Vec<Atom>, continuous: Option<ContinuousPart>) -> Result<Self> {
        for a in &atoms {
            if !(a.beta > 0.0 && a.beta <= 1.0) {
                return Err(Error::InvalidDensity(format!("atom location {} outside (0, 1]", a.beta)));
            }
            if !(a.weight > 0.0 && a.weight.is_finite()) {
                return Err(Error::InvalidDensity(format!("atom weight {} must be positive", a.weight)));
            }
        }
        atoms.sort_by(|a, b| a.beta.total_cmp(&b.beta));
        if let Some(w) = atoms.windows(2).find(|w| w[0].beta == w[1].beta) {
            return Err(Error::InvalidDensity(format!("atom location {} repeated", w[0].beta)));
        }
        if atoms.is_empty() && continuous.is_none() {
            return Err(Error::InvalidDensity("density has neither atoms nor a continuous part".into()));
        }
        let mut total: f64 = atoms.iter().map(|a| a.weight).sum();
        if let Some(c) = &continuous {
            c.validate()?;
            total += c.mass()?;
        }
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::InvalidDensity(format!(
                "total weight is {total}; an order density must be normalized to 1"
            )));
        }
        Ok(Self { atoms, continuous })
    }

    /// `δ(β − ν)`.
    pub fn single(nu: f64) -> Result<Self> {
        Self::new(vec![Atom { beta: nu, weight: 1.0 }], None)
    }

    /// `b₁ δ(β − β₁) + b₂ δ(β − β₂)`.
    pub fn two_atoms(beta1: f64, b1: f64, beta2: f64, b2: f64) -> Result<Self> {
        Self::new(vec![Atom { beta: beta1, weight: b1 }, Atom { beta: beta2, weight: b2 }], None)
    }

    /// `½ δ(β − 1/4) + ½ δ(β − 3/4)`.
    pub fn two_atom_preset() -> Self {
        Self::two_atoms(0.25, 0.5, 0.75, 0.5).expect("preset is valid")
    }

    /// `c(β) = 1` on `[0, 1]`.
    pub fn uniform() -> Self {
        Self::new(Vec::new(), Some(ContinuousPart::Uniform { level: 1.0 })).expect("preset is valid")
    }

    /// A continuous density given by a bounded callable, plus optional atoms.
    pub fn with_function<F>(atoms: Vec<Atom>, c: F, bound: f64, smoothness: Smoothness, label: &str) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::new(atoms, Some(ContinuousPart::Function { c: Arc::new(c), bound, smoothness, label: label.to_string() }))
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn continuous(&self) -> Option<&ContinuousPart> {
        self.continuous.as_ref()
    }

    /// The single atom location if the density is `δ(β − ν)`.
    pub fn single_order(&self) -> Option<f64> {
        match (self.atoms.as_slice(), &self.continuous) {
            ([a], None) => Some(a.beta),
            _ => None,
        }
    }

    /// True for `δ(β − 1)`, which has no branch cut.
    pub fn is_classical(&self) -> bool {
        self.single_order() == Some(1.0)
    }

    /// `B(s) = e^m · B̃` for `s = e^l`, returned as `(m, B̃)` so that neither factor
    /// overflows or underflows far out on the ray.
    pub(crate) fn scaled_b_of_log(&self, l: Complex64) -> Result<(f64, Complex64)> {
        let turns = l.im / std::f64::consts::PI;
        let mut parts: Vec<(f64, Complex64)> = Vec::with_capacity(self.atoms.len() + 1);
        for a in &self.atoms {
            let phase = a.beta * turns;
            parts.push((a.weight.ln() + a.beta * l.re, Complex64::new(cos_pi(phase), sin_pi(phase))));
        }
        match &self.continuous {
            Some(ContinuousPart::Uniform { level }) => {
                let (m, v) = scaled_expm1_over(l, turns);
                parts.push((level.ln() + m, v));
            }
            Some(ContinuousPart::Function { c, label, .. }) => {
                let (m, v) = scaled_function_transform(c.as_ref(), l, label)?;
                if v != Complex64::new(0.0, 0.0) {
                    parts.push((m, v));
                }
            }
            None => {}
        }
        let m = parts.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
        let sum = parts.iter().fold(Complex64::new(0.0, 0.0), |acc, (mi, v)| acc + v * (mi - m).exp());
        Ok((m, sum))
    }

    /// `B(s) = ∫ b(β) s^β dβ` on the principal branch.
    pub fn b_transform(&self, s: Complex64) -> Result<Complex64> {
        if s == Complex64::new(0.0, 0.0) || !s.is_finite() {
            return Err(crate::error::domain(format!("b_transform: s = {s} must be finite and nonzero")));
        }
        let (m, v) = self.scaled_b_of_log(s.ln())?;
        Ok(v * m.exp())
    }

    /// The grammar form of an atoms-only or uniform density.
    pub fn spec_string(&self) -> String {
        match (&self.continuous, self.atoms.as_slice()) {
            (None, [a]) => format!("single:{}", a.beta),
            (Some(ContinuousPart::Uniform { level }), []) if *level == 1.0 => "uniform".to_string(),
            (Some(ContinuousPart::Function { label, .. }), _) => label.clone(),
            _ => {
                let atoms: Vec<String> = self.atoms.iter().map(|a| format!("{}={}", a.beta, a.weight)).collect();
                format!("atoms:{}", atoms.join(","))
            }
        }
    }
}

// e^{l} with its phase taken in turns so that l = u + iπ is exact.
fn exp_turns(re: f64, turns: f64) -> Complex64 {
    Complex64::new(cos_pi(turns), sin_pi(turns)) * re.exp()
}

// (e^l − 1)/l scaled by e^{−max(0, Re l)}.
fn scaled_expm1_over(l: Complex64, turns: f64) -> (f64, Complex64) {
    if l.norm() < 1e-3 {
        let v = Complex64::new(1.0, 0.0) + l * (0.5 + l * (1.0 / 6.0 + l * (1.0 / 24.0 + l / 120.0)));
        return (0.0, v);
    }
    let m = l.re.max(0.0);
    let v = (exp_turns(l.re - m, turns) - (-m).exp()) / l;
    (m, v)
}

// ∫₀¹ c(β) e^{βl} dβ scaled by e^{−max(0, Re l)}; far out the mass sits at one end.
fn scaled_function_transform(
    c: &(dyn Fn(f64) -> f64 + Send + Sync),
    l: Complex64,
    label: &str,
) -> Result<(f64, Complex64)> {
    const WINDOW: f64 = 60.0;
    let m = l.re.max(0.0);
    let (a, b) = if l.re < -WINDOW {
        (0.0, WINDOW / -l.re)
    } else if l.re > WINDOW {
        (1.0 - WINDOW / l.re, 1.0)
    } else {
        (0.0, 1.0)
    };
    let r = integrate(|beta: f64| Ok((l * beta - m).exp() * c(beta)), a, b, 1e-300, 1e-12, 400)?;
    if !r.converged {
        return Err(Error::Quadrature {
            what: format!("B(s) for continuous density {label} at ln s = {l}"),
            estimate: r.abs_error,
            tol: 1e-12 * r.value.norm(),
        });
    }
    Ok((m, r.value))
}

impl FromStr for OrderDensity {
    type Err = Error;

    /// Grammar: `single:ν`, `atoms:β=w,β=w,...`, `two-atoms:β₁,b₁,β₂,b₂`, `uniform`.
    fn from_str(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if spec == "uniform" {
            return Ok(Self::uniform());
        }
        let (kind, body) =
            spec.split_once(':').ok_or_else(|| Error::InvalidDensity(format!("unknown density '{spec}'")))?;
        let number = |tok: &str| -> Result<f64> {
            tok.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidDensity(format!("'{}' is not a number in '{spec}'", tok.trim())))
        };
        match kind {
            "single" => Self::single(number(body)?),
            "atoms" => {
                let mut atoms = Vec::new();
                for item in body.split(',') {
                    let (b, w) = item.split_once('=').ok_or_else(|| {
                        Error::InvalidDensity(format!("atom '{}' is not of the form beta=weight", item.trim()))
                    })?;
                    atoms.push(Atom { beta: number(b)?, weight: number(w)? });
                }
                Self::new(atoms, None)
            }
            "two-atoms" => {
                let v: Vec<&str> = body.split(',').collect();
                if v.len() != 4 {
                    return Err(Error::InvalidDensity(format!("two-atoms expects 4 numbers, got '{body}'")));
                }
                Self::two_atoms(number(v[0])?, number(v[1])?, number(v[2])?, number(v[3])?)
            }
            other => Err(Error::InvalidDensity(format!("unknown density kind '{other}'"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_atom_is_a_power() {
        let d = OrderDensity::single(0.5).unwrap();
        let b = d.b_transform(Complex64::new(4.0, 0.0)).unwrap();
        assert!((b.re - 2.0).abs() < 1e-15 && b.im.abs() < 1e-15);
    }

    #[test]
    fn two_atom_value() {
        let b = OrderDensity::two_atom_preset().b_transform(Complex64::new(4.0, 0.0)).unwrap();
        // ½·4^{1/4} + ½·4^{3/4}
        assert!((b.re - 2.121_320_343_559_642_6).abs() < 1e-14);
    }

    #[test]
    fn uniform_closed_form() {
        let d = OrderDensity::uniform();
        for &s in &[0.01_f64, 0.5, 0.999_9, 1.0, 1.000_1, 3.0, 1e4] {
            let b = d.b_transform(Complex64::new(s, 0.0)).unwrap().re;
            let want = if s == 1.0 { 1.0 } else { (s - 1.0) / s.ln() };
            assert!((b - want).abs() < 1e-12 * want, "s={s}: {b} vs {want}");
        }
    }

    #[test]
    fn function_density_matches_closed_form() {
        let c = OrderDensity::with_function(Vec::new(), |_| 1.0, 1.0, Smoothness::Smooth, "flat").unwrap();
        let u = OrderDensity::uniform();
        for &s in &[Complex64::new(0.3, 0.0), Complex64::new(5.0, 2.0), Complex64::new(-2.0, 0.0)] {
            let a = c.b_transform(s).unwrap();
            let b = u.b_transform(s).unwrap();
            assert!((a - b).norm() < 1e-12 * b.norm(), "s={s}: {a} vs {b}");
        }
        for &u_log in &[-500.0, -3.0, 0.0, 2.0, 300.0] {
            let l = Complex64::new(u_log, std::f64::consts::PI);
            let (ma, va) = c.scaled_b_of_log(l).unwrap();
            let (mb, vb) = u.scaled_b_of_log(l).unwrap();
            assert!((ma - mb).abs() < 1e-12 && (va - vb).norm() < 1e-11 * vb.norm(), "u={u_log}");
        }
    }

    #[test]
    fn parses_grammar() {
        let d: OrderDensity = "atoms:0.75=0.5,0.25=0.5".parse().unwrap();
        assert_eq!(d.atoms()[0].beta, 0.25);
        assert_eq!(d.spec_string(), "atoms:0.25=0.5,0.75=0.5");
        let d: OrderDensity = "two-atoms:0.25,0.5,0.75,0.5".parse().unwrap();
        assert_eq!(d.atoms().len(), 2);
        assert_eq!("single:0.5".parse::<OrderDensity>().unwrap().single_order(), Some(0.5));
        assert!("uniform".parse::<OrderDensity>().unwrap().continuous().is_some());
    }

    #[test]
    fn rejects_bad_specs() {
        let e = "atoms:0.5=0.5".parse::<OrderDensity>().unwrap_err();
        assert!(e.to_string().contains("normalized"), "{e}");
        let e = "atoms:0.5=x".parse::<OrderDensity>().unwrap_err();
        assert!(e.to_string().contains("'x'"), "{e}");
        assert!("gauss:1".parse::<OrderDensity>().is_err());
        assert!("single:1.5".parse::<OrderDensity>().is_err());
        assert!("atoms:0.5=0.5,0.5=0.5".parse::<OrderDensity>().is_err());
    }
}
