//! Volumes of the hyperelliptic locus `H_g`.
//!
//! A genus `g` hyperelliptic surface is a double cover of a sphere branched
//! at `2g + 2` points, so `vol(H_g)` is the volume of the genus 0 moduli
//! space with `2g + 2` cone points of angle `π`, divided by `(2g + 2)!`.

use num_bigint::BigInt;
use serde::Serialize;

use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::profiles::MarkingProfile;
use crate::scalars::{factorial, int, serde_rational, to_wp_volume, PiGraded, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HyperellipticRow {
    pub g: usize,
    pub n: usize,
    /// `V_{2g+2}(iπ, …, iπ)`.
    #[serde(with = "serde_rational")]
    pub v_norm: Rational,
    pub vol: PiGraded,
}

impl HyperellipticRow {
    /// CSV line matching [`CSV_HEADER`], with an optional approximate decimal.
    pub fn csv_line(&self, decimal: Option<usize>) -> String {
        let mut line = format!(
            "{},{},{},{},{}",
            self.g, self.n, self.v_norm, self.vol.coeff, self.vol.pi_exp
        );
        if let Some(d) = decimal {
            line.push(',');
            line.push_str(&self.vol.to_decimal(d));
        }
        line
    }
}

pub const CSV_HEADER: &str = "g,n,v_norm,vol_coeff,pi_exp";

/// All-π profile with `2g + 2` marks.
pub fn hyperelliptic_profile(g: usize) -> Result<MarkingProfile> {
    if g < 2 {
        return Err(Error::Domain(format!(
            "g = {g} is not admissible; the hyperelliptic locus formula requires g ≥ 2"
        )));
    }
    MarkingProfile::conical(&vec![int(1); 2 * g + 2])
}

pub fn hyperelliptic_volume(g: usize) -> Result<HyperellipticRow> {
    hyperelliptic_volume_with(&Engine::default(), g)
}

/// Same as [`hyperelliptic_volume`] on a caller-supplied engine.
pub fn hyperelliptic_volume_with(engine: &Engine, g: usize) -> Result<HyperellipticRow> {
    let p = hyperelliptic_profile(g)?;
    let n = p.len();
    let v_norm = engine.v_conical(&p)?;
    let wp = to_wp_volume(&v_norm, n)?;
    let vol = PiGraded {
        coeff: wp.coeff / Rational::from_integer(factorial(n as u64)),
        pi_exp: wp.pi_exp,
    };
    Ok(HyperellipticRow { g, n, v_norm, vol })
}

/// `vol(H_{g+1}) / vol(H_g)` for consecutive rows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VolumeRatio {
    pub g: usize,
    #[serde(with = "serde_rational")]
    pub coeff: Rational,
    pub pi_exp: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HyperellipticTable {
    pub rows: Vec<HyperellipticRow>,
    pub ratios: Vec<VolumeRatio>,
}

pub fn hyperelliptic_table(g_max: usize) -> Result<HyperellipticTable> {
    hyperelliptic_table_with(&Engine::default(), g_max)
}

pub fn hyperelliptic_table_with(engine: &Engine, g_max: usize) -> Result<HyperellipticTable> {
    if g_max < 2 {
        return Err(Error::Domain(format!("g_max = {g_max}: the table starts at g = 2")));
    }
    let rows = (2..=g_max)
        .map(|g| hyperelliptic_volume_with(engine, g))
        .collect::<Result<Vec<_>>>()?;
    let ratios = rows
        .windows(2)
        .map(|w| {
            let (coeff, pi_exp) = w[1].vol.ratio(&w[0].vol)?;
            Ok(VolumeRatio { g: w[0].g, coeff, pi_exp })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(HyperellipticTable { rows, ratios })
}

/// `(2g+2)!·(2g−1)!/2^(2g−1)`: `v_norm` divided by this is `vol_coeff`.
pub fn normalization_divisor(g: usize) -> BigInt {
    factorial(2 * g as u64 + 2) * factorial(2 * g as u64 - 1) / (BigInt::from(1) << (2 * g - 1))
}
