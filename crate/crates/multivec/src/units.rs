//! Unit conversion and capital-recovery arithmetic.
//!
//! Canonical internal units are MWh (energy), tonne (mass), EUR (money) and
//! hour (time). Source tables mix GJ, MJ, MMBTU, kW, kt and friends; everything
//! is converted at ingestion through this module.

use crate::{Error, Result};

/// 1 GJ expressed in MWh. Fixed constant; every other energy factor derives
/// from it so that chained conversions compose exactly.
pub const MWH_PER_GJ: f64 = 0.27777778;

/// 1 MMBTU expressed in GJ.
pub const GJ_PER_MMBTU: f64 = 1.055056;

/// Lower heating value of hydrogen, GJ per tonne.
pub const H2_LHV_GJ_PER_TONNE: f64 = 120.0;

/// Lower heating value of hydrogen, MWh per tonne.
pub const H2_LHV_MWH_PER_TONNE: f64 = H2_LHV_GJ_PER_TONNE * MWH_PER_GJ;

/// Dimension exponents for (energy, mass, money, time).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dimension {
    pub energy: i8,
    pub mass: i8,
    pub money: i8,
    pub time: i8,
}

impl Dimension {
    const fn new(energy: i8, mass: i8, money: i8, time: i8) -> Self {
        Dimension {
            energy,
            mass,
            money,
            time,
        }
    }

    fn sub(self, other: Self) -> Self {
        Dimension::new(
            self.energy - other.energy,
            self.mass - other.mass,
            self.money - other.money,
            self.time - other.time,
        )
    }
}

/// A unit expression: either an atom ("GJ") or a ratio ("EUR/GJ").
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unit {
    pub dimension: Dimension,
    /// Multiplier taking a quantity in this unit to canonical units.
    pub factor: f64,
}

const DIM_ENERGY: Dimension = Dimension::new(1, 0, 0, 0);
const DIM_MASS: Dimension = Dimension::new(0, 1, 0, 0);
const DIM_MONEY: Dimension = Dimension::new(0, 0, 1, 0);
const DIM_TIME: Dimension = Dimension::new(0, 0, 0, 1);

fn atom(name: &str) -> Option<Unit> {
    let (dimension, factor) = match name {
        "MJ" => (DIM_ENERGY, MWH_PER_GJ * 1e-3),
        "GJ" => (DIM_ENERGY, MWH_PER_GJ),
        "MMBTU" | "MMBtu" | "mmbtu" => (DIM_ENERGY, GJ_PER_MMBTU * MWH_PER_GJ),
        "kWh" => (DIM_ENERGY, 1e-3),
        "MWh" => (DIM_ENERGY, 1.0),
        "GWh" => (DIM_ENERGY, 1e3),
        "TWh" => (DIM_ENERGY, 1e6),
        "kg" => (DIM_MASS, 1e-3),
        "t" | "tonne" => (DIM_MASS, 1.0),
        "kt" => (DIM_MASS, 1e3),
        "Mt" => (DIM_MASS, 1e6),
        "EUR" => (DIM_MONEY, 1.0),
        "kEUR" => (DIM_MONEY, 1e3),
        "MEUR" => (DIM_MONEY, 1e6),
        "h" => (DIM_TIME, 1.0),
        "y" => (DIM_TIME, 8760.0),
        _ => return None,
    };
    Some(Unit { dimension, factor })
}

impl Unit {
    /// Parse a unit atom or a single ratio `num/den`.
    pub fn parse(text: &str) -> Result<Unit> {
        let text = text.trim();
        match text.split_once('/') {
            None => atom(text).ok_or_else(|| Error::UnknownUnit(text.to_string())),
            Some((num, den)) => {
                let n = atom(num.trim()).ok_or_else(|| Error::UnknownUnit(num.to_string()))?;
                let d = atom(den.trim()).ok_or_else(|| Error::UnknownUnit(den.to_string()))?;
                Ok(Unit {
                    dimension: n.dimension.sub(d.dimension),
                    factor: n.factor / d.factor,
                })
            }
        }
    }
}

/// Convert `quantity` from one unit expression to another.
///
/// Round trips are identity to 1e-12 relative because all factors derive from
/// a single constant per dimension pair.
pub fn convert_units(quantity: f64, from_unit: &str, to_unit: &str) -> Result<f64> {
    let from = Unit::parse(from_unit)?;
    let to = Unit::parse(to_unit)?;
    if from.dimension != to.dimension {
        return Err(Error::IncompatibleUnits {
            from: from_unit.to_string(),
            to: to_unit.to_string(),
        });
    }
    Ok(quantity * from.factor / to.factor)
}

/// Capital recovery factor for a lifetime in years at a fractional discount
/// rate. Rate zero degenerates to straight-line 1/L.
pub fn capital_recovery_factor(lifetime_years: f64, discount_rate: f64) -> Result<f64> {
    if !(lifetime_years >= 1.0) {
        return Err(Error::BadLifetime(lifetime_years));
    }
    if !(0.0..1.0).contains(&discount_rate) {
        return Err(Error::BadDiscountRate(discount_rate));
    }
    if discount_rate == 0.0 {
        return Ok(1.0 / lifetime_years);
    }
    let growth = (1.0 + discount_rate).powf(lifetime_years);
    Ok(discount_rate * growth / (growth - 1.0))
}

/// Annualized capital cost per unit of capacity: capex × CRF(L, r).
pub fn annualize(capex: f64, lifetime_years: f64, discount_rate: f64) -> Result<f64> {
    Ok(capex * capital_recovery_factor(lifetime_years, discount_rate)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Independent closed-form evaluation used as the oracle for `annualize`.
    fn crf_oracle(lifetime: f64, rate: f64) -> f64 {
        if rate == 0.0 {
            return 1.0 / lifetime;
        }
        // Evaluate (1+r)^L by exp/ln instead of powf to stay independent of
        // the implementation route.
        let growth = (lifetime * (1.0 + rate).ln()).exp();
        rate * growth / (growth - 1.0)
    }

    #[test]
    fn annualize_one_year_zero_rate_is_identity() {
        assert_eq!(annualize(1000.0, 1.0, 0.0).unwrap(), 1000.0);
    }

    #[test]
    fn annualize_matches_oracle() {
        let got = annualize(1000.0, 20.0, 0.045).unwrap();
        let want = 1000.0 * crf_oracle(20.0, 0.045);
        assert_relative_eq!(got, want, max_relative = 1e-9);
        assert_relative_eq!(got, 76.87614432, max_relative = 1e-8);

        // onshore wind: 851 EUR/kW over 30 years at 4.5%
        let wind = annualize(851_000.0, 30.0, 0.045).unwrap();
        assert_relative_eq!(wind, 851_000.0 * crf_oracle(30.0, 0.045), max_relative = 1e-9);
        assert!((wind - 52_243.9).abs() < 1.0, "wind annualized = {wind}");
    }

    #[test]
    fn annualize_monotone_in_rate() {
        let mut last = annualize(1.0, 20.0, 0.0).unwrap();
        for i in 1..50 {
            let r = i as f64 * 0.01;
            let next = annualize(1.0, 20.0, r).unwrap();
            assert!(next > last, "CRF not increasing at r={r}");
            last = next;
        }
    }

    #[test]
    fn annualize_rejects_bad_inputs() {
        assert!(annualize(1.0, 0.5, 0.05).is_err());
        assert!(annualize(1.0, -3.0, 0.05).is_err());
        assert!(annualize(1.0, 10.0, 1.0).is_err());
    }

    #[test]
    fn gas_price_per_gj_to_per_mwh() {
        let p = convert_units(8.56, "EUR/GJ", "EUR/MWh").unwrap();
        assert_relative_eq!(p, 8.56 / MWH_PER_GJ, max_relative = 1e-12);
        assert!((p - 30.816).abs() < 1e-3);
    }

    #[test]
    fn round_trip_is_identity() {
        let gj = convert_units(1.0, "MWh", "GJ").unwrap();
        let back = convert_units(gj, "GJ", "MWh").unwrap();
        assert_relative_eq!(back, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn h2_intensity_gj_to_mwh() {
        let v = convert_units(11.2, "GJ/t", "MWh/t").unwrap();
        assert_relative_eq!(v, 11.2 * MWH_PER_GJ, max_relative = 1e-12);
        assert!((v - 3.1111).abs() < 1e-4);
    }

    #[test]
    fn conversion_composes() {
        let a = convert_units(13.87, "MJ", "MMBTU").unwrap();
        let b = convert_units(a, "MMBTU", "kWh").unwrap();
        let direct = convert_units(13.87, "MJ", "kWh").unwrap();
        assert_relative_eq!(b, direct, max_relative = 1e-12);
    }

    #[test]
    fn incompatible_dimensions_error() {
        assert!(convert_units(1.0, "MWh", "t").is_err());
        assert!(convert_units(1.0, "EUR/MWh", "EUR/t").is_err());
        assert!(matches!(
            convert_units(1.0, "parsec", "MWh"),
            Err(Error::UnknownUnit(_))
        ));
    }
}
