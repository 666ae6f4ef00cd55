//! Liquid-fuel supply chain: synthetic-fuel plants parameterized per tonne of
//! CO2 feed, conventional fuel purchases, annual fuel balances, the linear
//! synfuel mandate, byproduct credits and every coupling into the power, H2
//! and carbon balances.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::lp::Sense;
use crate::model::{CarbonCategory, CostCategory, ModelContext};
use crate::system::{EnergySystem, FuelRole, Violation};
use crate::units::annualize;
use crate::{Error, Result};

/// Per-tonne-of-CO2-feed plant characterization. All values canonical:
/// MWh, tonne, EUR, tonne-per-hour.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SynfuelTechnology {
    pub id: String,
    pub zone: String,
    /// Human label such as "A", "B", "C".
    pub option_label: String,
    pub capex_eur_per_tph: f64,
    pub fom_eur_per_tph_y: f64,
    pub vom_eur_per_t: f64,
    /// Plant fuel cost per tonne of feed; no table prices one, so it
    /// defaults to zero but stays configurable.
    pub plant_fuel_eur_per_t: f64,
    /// Fraction of feed vented to the atmosphere.
    pub mu_emit: f64,
    /// Fraction of feed recaptured into the captured-CO2 stream.
    pub mu_capture: f64,
    pub h2_in_t_per_t: f64,
    pub elec_in_mwh_per_t: f64,
    /// MWh of each product per tonne of feed, keyed by fuel name.
    pub yields_mwh_per_t: BTreeMap<String, f64>,
    pub lifetime_y: f64,
    pub cap_min_tph: f64,
    pub cap_max_tph: f64,
}

/// Outputs of running a plant on a given CO2 feed.
#[derive(Debug, Clone, PartialEq)]
pub struct SynfuelFlows {
    /// MWh per product fuel.
    pub fuels_mwh: BTreeMap<String, f64>,
    pub h2_in_t: f64,
    pub elec_in_mwh: f64,
    pub emitted_t: f64,
    pub captured_t: f64,
}

/// Scale the per-tonne coefficients by a feed amount.
pub fn synfuel_stoichiometry(tech: &SynfuelTechnology, co2_feed_t: f64) -> Result<SynfuelFlows> {
    if !(co2_feed_t >= 0.0) {
        return Err(Error::Demand(format!(
            "synfuel '{}': negative CO2 feed {co2_feed_t}",
            tech.id
        )));
    }
    Ok(SynfuelFlows {
        fuels_mwh: tech
            .yields_mwh_per_t
            .iter()
            .map(|(k, v)| (k.clone(), v * co2_feed_t))
            .collect(),
        h2_in_t: tech.h2_in_t_per_t * co2_feed_t,
        elec_in_mwh: tech.elec_in_mwh_per_t * co2_feed_t,
        emitted_t: tech.mu_emit * co2_feed_t,
        captured_t: tech.mu_capture * co2_feed_t,
    })
}

/// Feed-carbon closure: carbon leaving as fuels plus the vented and
/// recaptured fractions must reproduce one tonne of feed.
pub fn carbon_closure(tech: &SynfuelTechnology, system: &EnergySystem) -> Option<f64> {
    let mut total = tech.mu_emit + tech.mu_capture;
    for (fuel, yield_mwh) in &tech.yields_mwh_per_t {
        let spec = system.fuel(fuel)?;
        total += yield_mwh * spec.co2_t_per_mwh;
    }
    Some(total)
}

pub(crate) fn validate_synfuel(
    tech: &SynfuelTechnology,
    system: &EnergySystem,
    out: &mut Vec<Violation>,
) {
    let mut push = |code: &'static str, message: String| {
        out.push(Violation { code, message });
    };
    for (fuel, y) in &tech.yields_mwh_per_t {
        if !(*y >= 0.0) {
            push(
                "synfuel.yield",
                format!("synfuel '{}': negative yield for '{fuel}'", tech.id),
            );
        }
        if system.fuel(fuel).is_none() {
            push(
                "synfuel.fuel",
                format!("synfuel '{}' yields unknown fuel '{fuel}'", tech.id),
            );
        }
    }
    for (what, v) in [("mu_emit", tech.mu_emit), ("mu_capture", tech.mu_capture)] {
        if !(0.0..=1.0).contains(&v) {
            push(
                "synfuel.mu",
                format!("synfuel '{}': {what} = {v} outside [0,1]", tech.id),
            );
        }
    }
    if tech.h2_in_t_per_t < 0.0 {
        push(
            "synfuel.h2_in",
            format!("synfuel '{}': negative H2 input", tech.id),
        );
    }
    if tech.cap_min_tph > tech.cap_max_tph {
        push(
            "synfuel.capacity",
            format!("synfuel '{}': minimum capacity exceeds maximum", tech.id),
        );
    }
    if let Some(closure) = carbon_closure(tech, system) {
        if (closure - 1.0).abs() > 0.02 {
            push(
                "synfuel.carbon_closure",
                format!(
                    "synfuel '{}': carbon closure {closure:.4} deviates from 1 by more than 2%",
                    tech.id
                ),
            );
        }
    }
}

/// Columns for plant capacity and per-step CO2 feed, with the feed-vs-capacity
/// rows. Costs are attached separately by [`build_liquid_fuel_costs`].
pub fn declare_synfuel_vars(ctx: &mut ModelContext) -> Result<()> {
    for tech in &ctx.system.synfuel {
        let cap = ctx.lp.add_column(
            format!("cap/sf/{}", tech.id),
            tech.cap_min_tph,
            tech.cap_max_tph,
            0.0,
        )?;
        let mut feed = Vec::with_capacity(ctx.steps);
        for t in 0..ctx.steps {
            let col = ctx.lp.add_column(
                format!("feed/{}/t{t:04}", tech.id),
                0.0,
                f64::INFINITY,
                0.0,
            )?;
            let row = ctx
                .lp
                .add_row(format!("cap_sf/{}/t{t:04}", tech.id), Sense::Le, 0.0)?;
            ctx.lp.add_coeff(row, col, 1.0);
            ctx.lp.add_coeff(row, cap, -1.0);
            feed.push(col.index());
        }
        ctx.index.synfuel.push(crate::model::CapDispatch {
            cap: cap.index(),
            new: cap.index(),
            dispatch: feed,
        });
    }
    Ok(())
}

/// Conventional purchase columns per (zone, t, liquid fuel).
pub fn declare_conventional_vars(ctx: &mut ModelContext) -> Result<()> {
    let liquids: Vec<String> = ctx
        .system
        .liquid_fuels()
        .iter()
        .map(|f| f.name.clone())
        .collect();
    for fuel in &liquids {
        let mut by_zone = Vec::new();
        for z in 0..ctx.system.zones.len() {
            let zid = ctx.system.zones[z].id.clone();
            let mut cols = Vec::with_capacity(ctx.steps);
            for t in 0..ctx.steps {
                let col = ctx.lp.add_column(
                    format!("conv/{fuel}/{zid}/t{t:04}"),
                    0.0,
                    f64::INFINITY,
                    0.0,
                )?;
                cols.push(col.index());
            }
            by_zone.push(cols);
        }
        ctx.index.conventional.insert(fuel.clone(), by_zone);
    }
    Ok(())
}

/// Objective terms: annualized capex+fom on plant capacity, ω-weighted
/// vom+fuel on feed, ω-weighted byproduct revenue (negative), ω-weighted
/// conventional purchase cost.
pub fn build_liquid_fuel_costs(ctx: &mut ModelContext) -> Result<()> {
    let rate = ctx.system.discount_rate;
    for (i, tech) in ctx.system.synfuel.iter().enumerate() {
        let cap_col = ctx.index.synfuel[i].cap;
        let annual =
            annualize(tech.capex_eur_per_tph, tech.lifetime_y, rate)? + tech.fom_eur_per_tph_y;
        let feed_cost = tech.vom_eur_per_t + tech.plant_fuel_eur_per_t;
        let mut credit_per_t = 0.0;
        for spec in ctx.system.byproduct_fuels() {
            if let Some(y) = tech.yields_mwh_per_t.get(&spec.name) {
                credit_per_t += y * spec.price_eur_per_mwh;
            }
        }
        let dispatch = ctx.index.synfuel[i].dispatch.clone();
        ctx.add_cost(cap_col, CostCategory::Synfuel, annual);
        for (t, col) in dispatch.iter().enumerate() {
            let w = ctx.weights[t];
            if feed_cost != 0.0 {
                ctx.add_cost(*col, CostCategory::Synfuel, w * feed_cost);
            }
            if credit_per_t != 0.0 {
                ctx.add_cost(*col, CostCategory::ByproductCredit, -w * credit_per_t);
            }
        }
    }
    let liquids: Vec<(String, f64)> = ctx
        .system
        .liquid_fuels()
        .iter()
        .map(|f| (f.name.clone(), f.price_eur_per_mwh))
        .collect();
    for (fuel, price) in liquids {
        let by_zone = ctx.index.conventional[&fuel].clone();
        for cols in by_zone {
            for (t, col) in cols.iter().enumerate() {
                let w = ctx.weights[t];
                ctx.add_cost(*col, CostCategory::ConventionalFuel, w * price);
                ctx.add_fuel_use(&fuel, *col, w);
            }
        }
    }
    Ok(())
}

/// One annual system-wide supply row per demanded liquid:
/// Σ ω·conv + Σ ω·τ_l·feed ≥ annual demand. Byproducts have no balance.
pub fn build_fuel_balance(ctx: &mut ModelContext) -> Result<()> {
    let liquids: Vec<String> = ctx
        .system
        .liquid_fuels()
        .iter()
        .map(|f| f.name.clone())
        .collect();
    for fuel in liquids {
        let annual_demand: f64 = ctx
            .system
            .demand_fuels_mwh
            .get(&fuel)
            .map(|by_zone| {
                by_zone
                    .values()
                    .map(|series| {
                        series
                            .iter()
                            .zip(&ctx.weights)
                            .map(|(d, w)| d * w)
                            .sum::<f64>()
                    })
                    .sum()
            })
            .unwrap_or(0.0);
        let row = ctx
            .lp
            .add_row(format!("fuel_supply/{fuel}"), Sense::Ge, annual_demand)?;
        for cols in &ctx.index.conventional[&fuel] {
            for (t, col) in cols.iter().enumerate() {
                ctx.lp
                    .add_coeff(row, crate::lp::ColId(*col), ctx.weights[t]);
            }
        }
        for (i, tech) in ctx.system.synfuel.iter().enumerate() {
            if let Some(tau) = tech.yields_mwh_per_t.get(&fuel) {
                if *tau > 0.0 {
                    for (t, col) in ctx.index.synfuel[i].dispatch.iter().enumerate() {
                        ctx.lp
                            .add_coeff(row, crate::lp::ColId(*col), ctx.weights[t] * tau);
                    }
                }
            }
        }
        ctx.fuel_supply_rows.insert(fuel, row.index());
    }
    Ok(())
}

/// Linearized mandate: (ζ−1)·Σ ω·τ_l·feed + ζ·Σ ω·conv_l = 0.
pub fn build_mandate(ctx: &mut ModelContext, fuel: &str, zeta: f64) -> Result<()> {
    if ctx.mandate_row.is_some() {
        return Err(Error::Scenario(
            "only one synthetic fuel mandate may be active".to_string(),
        ));
    }
    if !(0.0..=1.0).contains(&zeta) {
        return Err(Error::Scenario(format!("mandate share {zeta} outside [0,1]")));
    }
    let row = ctx.lp.add_row(format!("mandate/{fuel}"), Sense::Eq, 0.0)?;
    for (i, tech) in ctx.system.synfuel.iter().enumerate() {
        if let Some(tau) = tech.yields_mwh_per_t.get(fuel) {
            if *tau > 0.0 {
                for (t, col) in ctx.index.synfuel[i].dispatch.iter().enumerate() {
                    ctx.lp.add_coeff(
                        row,
                        crate::lp::ColId(*col),
                        (zeta - 1.0) * ctx.weights[t] * tau,
                    );
                }
            }
        }
    }
    let by_zone = ctx
        .index
        .conventional
        .get(fuel)
        .ok_or_else(|| Error::Scenario(format!("mandate on unknown liquid fuel '{fuel}'")))?
        .clone();
    for cols in by_zone {
        for (t, col) in cols.iter().enumerate() {
            ctx.lp
                .add_coeff(row, crate::lp::ColId(*col), zeta * ctx.weights[t]);
        }
    }
    ctx.mandate_row = Some((fuel.to_string(), row.index()));
    Ok(())
}

/// Feed electricity and H2 demands into the zonal power and H2 balances.
pub fn build_coupling_terms(ctx: &mut ModelContext) -> Result<()> {
    for (i, tech) in ctx.system.synfuel.iter().enumerate() {
        let z = ctx.zone_index(&tech.zone)?;
        for t in 0..ctx.steps {
            let col = crate::lp::ColId(ctx.index.synfuel[i].dispatch[t]);
            if tech.elec_in_mwh_per_t != 0.0 {
                let row = ctx.power_balance[z][t];
                ctx.lp.add_coeff(row, col, -tech.elec_in_mwh_per_t);
            }
            if tech.h2_in_t_per_t != 0.0 {
                let row = ctx.h2_balance[z][t];
                ctx.lp.add_coeff(row, col, -tech.h2_in_t_per_t);
            }
        }
    }
    Ok(())
}

/// Emissions and captured-CO2 bookkeeping for the whole liquid-fuel chain:
/// process venting, combustion of everything produced (demanded or not),
/// byproduct combustion, conventional combustion; the feed draw from the
/// zonal captured balance and the recapture flowing back into it.
pub fn build_fuel_emission_terms(ctx: &mut ModelContext) -> Result<()> {
    for (i, tech) in ctx.system.synfuel.iter().enumerate() {
        let z = ctx.zone_index(&tech.zone)?;
        let mut fuel_theta = 0.0;
        let mut byproduct_theta = 0.0;
        for (fuel, y) in &tech.yields_mwh_per_t {
            let spec = ctx
                .system
                .fuel(fuel)
                .ok_or_else(|| Error::Scenario(format!("unknown synfuel product '{fuel}'")))?;
            match spec.role {
                FuelRole::Byproduct => byproduct_theta += y * spec.co2_t_per_mwh,
                _ => fuel_theta += y * spec.co2_t_per_mwh,
            }
        }
        for t in 0..ctx.steps {
            let col = ctx.index.synfuel[i].dispatch[t];
            let w = ctx.weights[t];
            ctx.add_carbon(CarbonCategory::EmitSynfuelProcess, col, w * tech.mu_emit);
            ctx.add_carbon(CarbonCategory::EmitSynfuelCombustion, col, w * fuel_theta);
            if byproduct_theta != 0.0 {
                ctx.add_carbon(
                    CarbonCategory::EmitByproductCombustion,
                    col,
                    w * byproduct_theta,
                );
            }
            // captured stream: the feed is drawn from it, the recaptured
            // fraction flows back
            let row = ctx.co2_balance[z][t];
            let cid = crate::lp::ColId(col);
            ctx.lp.add_coeff(row, cid, -1.0 + tech.mu_capture);
            ctx.add_carbon(CarbonCategory::SynfuelFeedDraw, col, -w);
            ctx.add_carbon(CarbonCategory::SynfuelRecapture, col, w * tech.mu_capture);
        }
    }
    let liquids: Vec<(String, f64)> = ctx
        .system
        .liquid_fuels()
        .iter()
        .map(|f| (f.name.clone(), f.co2_t_per_mwh))
        .collect();
    for (fuel, theta) in liquids {
        let by_zone = ctx.index.conventional[&fuel].clone();
        for cols in by_zone {
            for (t, col) in cols.iter().enumerate() {
                ctx.add_carbon(
                    CarbonCategory::EmitConventionalCombustion,
                    *col,
                    ctx.weights[t] * theta,
                );
            }
        }
    }
    Ok(())
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::units::MWH_PER_GJ;
    use approx::assert_relative_eq;

    pub(crate) fn option_a() -> SynfuelTechnology {
        // Yields in GJ per tonne feed: diesel 1.889, gasoline 1.784, jet 3.225
        let mut yields = BTreeMap::new();
        yields.insert("diesel".to_string(), 1.889 * MWH_PER_GJ);
        yields.insert("gasoline".to_string(), 1.784 * MWH_PER_GJ);
        yields.insert("jet".to_string(), 3.225 * MWH_PER_GJ);
        SynfuelTechnology {
            id: "sf_a".into(),
            zone: "z".into(),
            option_label: "A".into(),
            capex_eur_per_tph: 3_635_000.0,
            fom_eur_per_tph_y: 193_000.0,
            vom_eur_per_t: 7.76,
            plant_fuel_eur_per_t: 0.0,
            mu_emit: 0.52,
            mu_capture: 0.0,
            h2_in_t_per_t: 11.2 / 120.0,
            elec_in_mwh_per_t: 0.13 * MWH_PER_GJ,
            yields_mwh_per_t: yields,
            lifetime_y: 40.0,
            cap_min_tph: 0.0,
            cap_max_tph: f64::INFINITY,
        }
    }

    #[test]
    fn option_a_flows_per_tonne() {
        let flows = synfuel_stoichiometry(&option_a(), 1.0).unwrap();
        assert_relative_eq!(
            flows.fuels_mwh["diesel"],
            1.889 * MWH_PER_GJ,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            flows.fuels_mwh["jet"],
            3.225 * MWH_PER_GJ,
            max_relative = 1e-12
        );
        assert_relative_eq!(flows.h2_in_t, 11.2 / 120.0, max_relative = 1e-12);
        assert_relative_eq!(flows.elec_in_mwh, 0.13 * MWH_PER_GJ, max_relative = 1e-12);
        assert_relative_eq!(flows.emitted_t, 0.52, max_relative = 1e-12);
        assert_eq!(flows.captured_t, 0.0);
    }

    #[test]
    fn zero_feed_yields_zero_flows() {
        let flows = synfuel_stoichiometry(&option_a(), 0.0).unwrap();
        assert!(flows.fuels_mwh.values().all(|v| *v == 0.0));
        assert_eq!(flows.h2_in_t, 0.0);
        assert_eq!(flows.emitted_t, 0.0);
    }

    #[test]
    fn negative_feed_rejected() {
        assert!(synfuel_stoichiometry(&option_a(), -1.0).is_err());
    }

    #[test]
    fn stoichiometry_is_linear_in_feed() {
        let tech = option_a();
        let one = synfuel_stoichiometry(&tech, 1.0).unwrap();
        let five = synfuel_stoichiometry(&tech, 5.0).unwrap();
        for (k, v) in &one.fuels_mwh {
            assert_relative_eq!(five.fuels_mwh[k], 5.0 * v, max_relative = 1e-12);
        }
        assert_relative_eq!(five.emitted_t, 5.0 * one.emitted_t, max_relative = 1e-12);
    }
}
