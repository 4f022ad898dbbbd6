use alloc::vec::Vec;

/// Per-example loss `φ_i` of the primal problem. Labels are already folded into `A_i`,
/// so the hinge family is a function of the margin `a = A_iᵀw`.
#[derive(Debug, Clone, PartialEq)]
pub enum Loss {
    /// `φ(a) = 0` for `a ≥ 1`, `1 − a − γ/2` for `a ≤ 1 − γ`, `(1 − a)²/(2γ)` otherwise.
    /// `φ*(b) = b + γb²/2` on `[−1, 0]`.
    SmoothedHinge,
    /// `φ_i(a) = ½(a − t_i)²`, with `φ_i*(b) = ½b² + t_i b`. It is 1-smooth and
    /// 1-strongly convex.
    Square { targets: Vec<f64> },
}

/// `−φ_i*(−x) = lin·x − (quad/2)x²` on `[lo, hi]`, `−∞` elsewhere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualTerm {
    pub quad: f64,
    pub lin: f64,
    pub lo: f64,
    pub hi: f64,
}

impl DualTerm {
    #[inline]
    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    /// `−φ*(−x)`.
    #[inline]
    pub fn value(&self, x: f64) -> f64 {
        if self.contains(x) {
            self.lin * x - 0.5 * self.quad * x * x
        } else {
            f64::NEG_INFINITY
        }
    }

    /// `argmin_s { w/2 (s − c)² + (1/n)(q/2 s² − lin s) }` over `[lo, hi]`, where
    /// `q = quad − shift`. Requires `w + q/n > 0`.
    #[inline]
    pub fn prox(&self, center: f64, weight: f64, n: f64, shift: f64) -> f64 {
        let q = self.quad - shift;
        let s = (weight * center + self.lin / n) / (weight + q / n);
        s.clamp(self.lo, self.hi)
    }

    /// Element of `∂φ*(−x)` closest to `margin`. On the interior this is `lin − quad·x`;
    /// at an endpoint the normal cone adds a half-line.
    #[inline]
    pub fn subgradient(&self, x: f64, margin: f64) -> f64 {
        let a = self.lin - self.quad * x;
        if x <= self.lo && self.lo.is_finite() {
            a.max(margin)
        } else if x >= self.hi && self.hi.is_finite() {
            a.min(margin)
        } else {
            a
        }
    }
}

impl Loss {
    /// `φ_i(a)`.
    pub fn phi(&self, i: usize, a: f64, gamma: f64) -> f64 {
        match self {
            Loss::SmoothedHinge => {
                if a >= 1.0 {
                    0.0
                } else if a <= 1.0 - gamma {
                    1.0 - a - 0.5 * gamma
                } else {
                    (1.0 - a) * (1.0 - a) / (2.0 * gamma)
                }
            }
            Loss::Square { targets } => 0.5 * (a - targets[i]) * (a - targets[i]),
        }
    }

    /// `φ_i*(b)`; `+∞` outside the conjugate domain.
    pub fn conjugate(&self, i: usize, b: f64, gamma: f64) -> f64 {
        let t = self.dual_term(i, gamma);
        let v = t.value(-b);
        if v == f64::NEG_INFINITY {
            f64::INFINITY
        } else {
            -v
        }
    }

    /// `φ_i'(a)`, the maximizer in `φ_i*(b) = sup_a ab − φ_i(a)` at `b = φ_i'(a)`.
    pub fn derivative(&self, i: usize, a: f64, gamma: f64) -> f64 {
        match self {
            Loss::SmoothedHinge => {
                if a >= 1.0 {
                    0.0
                } else if a <= 1.0 - gamma {
                    -1.0
                } else {
                    (a - 1.0) / gamma
                }
            }
            Loss::Square { targets } => a - targets[i],
        }
    }

    pub fn dual_term(&self, i: usize, gamma: f64) -> DualTerm {
        match self {
            Loss::SmoothedHinge => DualTerm {
                quad: gamma,
                lin: 1.0,
                lo: 0.0,
                hi: 1.0,
            },
            Loss::Square { targets } => DualTerm {
                quad: 1.0,
                lin: targets[i],
                lo: f64::NEG_INFINITY,
                hi: f64::INFINITY,
            },
        }
    }

    /// `η` with every `φ_i` being `1/η`-strongly convex, if the family is strongly convex.
    pub fn strong_convexity_eta(&self) -> Option<f64> {
        match self {
            Loss::SmoothedHinge => None,
            Loss::Square { .. } => Some(1.0),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Loss::SmoothedHinge => "smoothed_hinge",
            Loss::Square { .. } => "square",
        }
    }
}
