//! Physical constants, derived constants and natural units.
//!
//! Everything is SI. The action quantum `h` and Boltzmann's `k` are inputs
//! like the others: they come from a constants file (bundled defaults in
//! `data/constants.txt`) so that historical values can be injected.
//!
//! The constants file has one `key = value` pair per line. Text after `#`
//! is ignored. Recognised keys are `c`, `G`, `R`, `F`, `h` and `k`; keys
//! missing from a file fall back to the bundled defaults.

use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

/// Contents of the bundled reference-constants file.
pub const BUNDLED_CONSTANTS: &str = include_str!("../data/constants.txt");

/// The six base constants used throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Speed of light, m/s.
    pub c: f64,
    /// Newtonian gravitational constant, m³/(kg·s²).
    pub g: f64,
    /// Molar gas constant, J/(mol·K).
    pub r: f64,
    /// Faraday constant, C/mol.
    pub f: f64,
    /// Quantum of action, J·s.
    pub h: f64,
    /// Boltzmann constant, J/K.
    pub k: f64,
}

/// Where a set of constants was loaded from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConstantsSource {
    Bundled,
    File(PathBuf),
}

impl fmt::Display for ConstantsSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstantsSource::Bundled => f.write_str("bundled defaults"),
            ConstantsSource::File(path) => write!(f, "{}", path.display()),
        }
    }
}

impl PhysicalConstants {
    /// The bundled reference values.
    pub fn reference() -> Self {
        Self::parse_with_defaults(BUNDLED_CONSTANTS, "bundled constants", None)
            .expect("bundled constants file is valid")
    }

    /// Parses a constants file; keys not present keep their bundled value.
    pub fn parse(text: &str, source_name: &str) -> Result<Self> {
        Self::parse_with_defaults(text, source_name, Some(Self::reference()))
    }

    /// Reads constants from `path`, or returns the bundled values when
    /// `path` is `None`.
    pub fn load(path: Option<&Path>) -> Result<(Self, ConstantsSource)> {
        match path {
            None => Ok((Self::reference(), ConstantsSource::Bundled)),
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
                    path: path.to_path_buf(),
                    source,
                })?;
                let pc = Self::parse(&text, &path.display().to_string())?;
                Ok((pc, ConstantsSource::File(path.to_path_buf())))
            }
        }
    }

    fn parse_with_defaults(text: &str, source_name: &str, defaults: Option<Self>) -> Result<Self> {
        let mut values: [Option<f64>; 6] = match defaults {
            Some(d) => [d.c, d.g, d.r, d.f, d.h, d.k].map(Some),
            None => [None; 6],
        };
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |message: String| Error::Parse {
                source_name: source_name.to_string(),
                line: idx + 1,
                message,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| parse_err(format!("expected `key = value`, got `{line}`")))?;
            let key = key.trim();
            let slot = match key {
                "c" => 0,
                "G" => 1,
                "R" => 2,
                "F" => 3,
                "h" => 4,
                "k" => 5,
                other => return Err(parse_err(format!("unknown constant `{other}`"))),
            };
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| parse_err(format!("`{}` is not a number", value.trim())))?;
            values[slot] = Some(value);
        }
        let get = |slot: usize, key: &str| {
            values[slot].ok_or_else(|| Error::Constants(format!("missing `{key}`")))
        };
        Self::new(
            get(0, "c")?,
            get(1, "G")?,
            get(2, "R")?,
            get(3, "F")?,
            get(4, "h")?,
            get(5, "k")?,
        )
    }

    /// Builds a validated set of constants. All values must be positive.
    pub fn new(c: f64, g: f64, r: f64, f: f64, h: f64, k: f64) -> Result<Self> {
        for (name, v) in [("c", c), ("G", g), ("R", r), ("F", f), ("h", h), ("k", k)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Constants(format!(
                    "`{name}` must be positive and finite, got {v}"
                )));
            }
        }
        Ok(Self { c, g, r, f, h, k })
    }

    /// Renders the constants in the file format accepted by [`Self::parse`].
    pub fn to_file_string(&self) -> String {
        format!(
            "c = {:e} # m/s\nG = {:e} # m^3/(kg s^2)\nR = {:e} # J/(mol K)\nF = {:e} # C/mol\nh = {:e} # J s\nk = {:e} # J/K\n",
            self.c, self.g, self.r, self.f, self.h, self.k
        )
    }
}

/// Constants that follow from [`PhysicalConstants`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedConstants {
    /// Avogadro number `R/k`, 1/mol.
    pub avogadro: f64,
    /// Elementary charge `F/N`, C.
    pub elementary_charge: f64,
    /// Energy-density Stefan-Boltzmann constant `8π⁵k⁴/(15c³h³)`, J/(m³·K⁴).
    pub sigma_u: f64,
}

pub fn derive_constants(pc: &PhysicalConstants) -> DerivedConstants {
    let avogadro = pc.r / pc.k;
    DerivedConstants {
        avogadro,
        elementary_charge: pc.f / avogadro,
        sigma_u: 8.0 * PI.powi(5) * pc.k.powi(4) / (15.0 * pc.c.powi(3) * pc.h.powi(3)),
    }
}

/// Natural units built from `h`, `c`, `G` and `k`.
///
/// Note these use `h`, not `ħ = h/2π`: they are the units obtained by
/// setting the radiation-law constants `a` and `b` (together with `c`
/// and `G`) to one. Modern tables quote the `ħ` variant, which is smaller
/// by a factor `√(2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanckUnits {
    /// m
    pub length: f64,
    /// s
    pub time: f64,
    /// kg
    pub mass: f64,
    /// K
    pub temperature: f64,
}

pub fn planck_units(pc: &PhysicalConstants) -> PlanckUnits {
    units_from(pc.h, pc.k, pc.c, pc.g)
}

/// Natural units parameterised by the Wien/Planck constants `a` (K·s) and
/// `b` (J·s) instead of `h` and `k`, via `h = b` and `k = b/a`.
pub fn planck_units_from_ab(a: f64, b: f64, c: f64, g: f64) -> PlanckUnits {
    units_from(b, b / a, c, g)
}

fn units_from(h: f64, k: f64, c: f64, g: f64) -> PlanckUnits {
    let length = (h * g / c.powi(3)).sqrt();
    PlanckUnits {
        length,
        time: length / c,
        mass: (h * c / g).sqrt(),
        temperature: (h * c.powi(5) / g).sqrt() / k,
    }
}
