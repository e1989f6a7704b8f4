use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelKind {
    /// K(t,t') = 2/t
    Harmonic,
    /// K(t,t') = 4t'(t'+1) / (t(t+1)(t+2)), for 2-uniform instances.
    Msvc,
    /// K(t,t') = β t'^q / Σ_{i≤t} i^q with q = 2/(c-1), for c ≥ 3.
    PowerLaw,
}

impl FromStr for KernelKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "harmonic" => Ok(KernelKind::Harmonic),
            "msvc" => Ok(KernelKind::Msvc),
            "power-law" | "powerlaw" => Ok(KernelKind::PowerLaw),
            other => Err(format!(
                "unknown kernel `{other}` (expected harmonic, msvc or power-law)"
            )),
        }
    }
}

impl fmt::Display for KernelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KernelKind::Harmonic => "harmonic",
            KernelKind::Msvc => "msvc",
            KernelKind::PowerLaw => "power-law",
        })
    }
}

/// A lower-triangular smoothing kernel. Every supported kernel factors as
/// K(t,t') = a(t) b(t') for t' ≤ t, which keeps z = Kx linear-time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    pub kind: KernelKind,
    pub c: usize,
}

impl KernelSpec {
    pub fn harmonic() -> Self {
        KernelSpec {
            kind: KernelKind::Harmonic,
            c: 1,
        }
    }

    pub fn msvc() -> Self {
        KernelSpec {
            kind: KernelKind::Msvc,
            c: 2,
        }
    }

    /// Panics unless `c ≥ 3`.
    pub fn power_law(c: usize) -> Self {
        assert!(c >= 3, "power-law kernel needs c >= 3");
        KernelSpec {
            kind: KernelKind::PowerLaw,
            c,
        }
    }

    /// The kernel matched to a c-uniform instance. Instances with c = 1 are
    /// meant to be padded to 2 and use the same kernel as c = 2.
    pub fn for_uniformity(c: usize) -> Self {
        if c <= 2 {
            Self::msvc()
        } else {
            Self::power_law(c)
        }
    }

    /// Row sum of the kernel.
    pub fn beta(&self) -> f64 {
        match self.kind {
            KernelKind::Harmonic => 2.0,
            KernelKind::Msvc => 4.0 / 3.0,
            KernelKind::PowerLaw => 2.0 * self.c as f64 / (self.c as f64 + 1.0),
        }
    }

    fn exponent(&self) -> f64 {
        2.0 / (self.c as f64 - 1.0)
    }

    /// Column factors b(1..=h).
    pub fn column_factors(&self, h: usize) -> Vec<f64> {
        (1..=h)
            .map(|t| {
                let t = t as f64;
                match self.kind {
                    KernelKind::Harmonic => 1.0,
                    KernelKind::Msvc => t * (t + 1.0),
                    KernelKind::PowerLaw => t.powf(self.exponent()),
                }
            })
            .collect()
    }

    /// Row factors a(1..=h).
    pub fn row_factors(&self, h: usize) -> Vec<f64> {
        match self.kind {
            KernelKind::Harmonic => (1..=h).map(|t| 2.0 / t as f64).collect(),
            KernelKind::Msvc => (1..=h)
                .map(|t| {
                    let t = t as f64;
                    4.0 / (t * (t + 1.0) * (t + 2.0))
                })
                .collect(),
            KernelKind::PowerLaw => {
                let beta = self.beta();
                let mut prefix = 0.0;
                self.column_factors(h)
                    .into_iter()
                    .map(|b| {
                        prefix += b;
                        beta / prefix
                    })
                    .collect()
            }
        }
    }

    /// K(t, t') with 1-based times.
    pub fn value(&self, t: usize, t_prime: usize) -> f64 {
        if t_prime > t || t_prime == 0 {
            return 0.0;
        }
        self.row_factors(t)[t - 1] * self.column_factors(t_prime)[t_prime - 1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lower_triangular() {
        for k in [
            KernelSpec::harmonic(),
            KernelSpec::msvc(),
            KernelSpec::power_law(4),
        ] {
            assert_eq!(k.value(3, 4), 0.0);
            assert!(k.value(4, 3) > 0.0);
        }
    }

    #[test]
    fn factored_rows_match_formulas() {
        let k = KernelSpec::msvc();
        assert!((k.value(3, 2) - 4.0 * 6.0 / 60.0).abs() < 1e-15);
        let k = KernelSpec::power_law(3);
        // q = 1: K(t,t') = 1.5 t' / (t(t+1)/2)
        assert!((k.value(4, 3) - 1.5 * 3.0 / 10.0).abs() < 1e-15);
        assert_eq!(KernelSpec::for_uniformity(1).kind, KernelKind::Msvc);
        assert_eq!(KernelSpec::for_uniformity(3).kind, KernelKind::PowerLaw);
    }
}
