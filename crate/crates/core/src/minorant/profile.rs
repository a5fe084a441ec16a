use std::fmt;
use std::path::Path;
use std::str::FromStr;

use super::MinorantModel;
use crate::error::{Error, Result};

/// Radial function that can be exported as a profile.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Profile {
    Phi,
    PhiHat,
    Autocorrelation,
    PsiTau,
    PsiHatTau,
}

impl Profile {
    pub const ALL: [Profile; 5] = [
        Profile::Phi,
        Profile::PhiHat,
        Profile::Autocorrelation,
        Profile::PsiTau,
        Profile::PsiHatTau,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Profile::Phi => "phi",
            Profile::PhiHat => "phi-hat",
            Profile::Autocorrelation => "autocorrelation",
            Profile::PsiTau => "psi",
            Profile::PsiHatTau => "psi-hat",
        }
    }

    /// Radius range covering the support (or the main lobes for transforms).
    pub fn range(self, model: &MinorantModel) -> f64 {
        match self {
            Profile::Phi => 1.1 * model.phi_radius(),
            Profile::Autocorrelation => 2.2 * model.phi_radius(),
            Profile::PsiTau => 1.1 * model.support_radius(),
            Profile::PhiHat | Profile::PsiHatTau => 5.0,
        }
    }

    pub fn evaluate(self, model: &MinorantModel, r: f64) -> Result<f64> {
        match self {
            Profile::Phi => Ok(model.phi(r)),
            Profile::PhiHat => model.phi_hat(r),
            Profile::Autocorrelation => Ok(model.autocorrelation(r)),
            Profile::PsiTau => Ok(model.psi_tau(r)),
            Profile::PsiHatTau => model.psi_hat_tau(r),
        }
    }

    /// `samples` equispaced `(radius, value)` pairs over [`Profile::range`].
    pub fn sample(self, model: &MinorantModel, samples: usize) -> Result<Vec<(f64, f64)>> {
        if samples < 2 {
            return Err(Error::Config(format!("need at least 2 samples, got {samples}")));
        }
        let top = self.range(model);
        (0..samples)
            .map(|i| {
                let r = top * i as f64 / (samples - 1) as f64;
                Ok((r, self.evaluate(model, r)?))
            })
            .collect()
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        Profile::ALL
            .into_iter()
            .find(|p| p.name() == key)
            .or(match key.as_str() {
                "phi-phi" | "phi*phi" => Some(Profile::Autocorrelation),
                "psi-tau" => Some(Profile::PsiTau),
                "psi-hat-tau" => Some(Profile::PsiHatTau),
                _ => None,
            })
            .ok_or_else(|| {
                let names: Vec<_> = Profile::ALL.iter().map(|p| p.name()).collect();
                Error::Config(format!("unknown profile {s:?}; expected one of {}", names.join(", ")))
            })
    }
}

/// Write a two-column `radius,value` CSV of the chosen profile.
pub fn write_profile_csv(
    model: &MinorantModel,
    profile: Profile,
    path: &Path,
    samples: usize,
) -> Result<()> {
    let rows = profile.sample(model, samples)?;
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["radius", "value"])?;
    for (r, v) in rows {
        w.write_record([r.to_string(), v.to_string()])?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}
