//! LP assembly: shared build context, cost attribution, the carbon ledger and
//! the canonical build order that makes outputs byte-reproducible.

use std::collections::{BTreeMap, HashMap};
use std::io::Write as _;
use std::path::Path;

use crate::lp::{FinalizedLp, LinearProgram, RowId, Sense};
use crate::system::{validate, EnergySystem};
use crate::{fuels, supply, Error, Result};

/// Objective attribution buckets for reporting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CostCategory {
    Power,
    H2Chain,
    CarbonChain,
    ConventionalFuel,
    Synfuel,
    ByproductCredit,
}

impl CostCategory {
    pub fn label(self) -> &'static str {
        match self {
            CostCategory::Power => "power",
            CostCategory::H2Chain => "h2_chain",
            CostCategory::CarbonChain => "carbon_chain",
            CostCategory::ConventionalFuel => "conventional_fuel",
            CostCategory::Synfuel => "synfuel",
            CostCategory::ByproductCredit => "byproduct_credit",
        }
    }

    pub fn all() -> [CostCategory; 6] {
        [
            CostCategory::Power,
            CostCategory::H2Chain,
            CostCategory::CarbonChain,
            CostCategory::ConventionalFuel,
            CostCategory::Synfuel,
            CostCategory::ByproductCredit,
        ]
    }
}

/// CO2 ledger categories. Every emitting or capturing operation contributes
/// to exactly one of these; annual tonnes, ω-weighted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CarbonCategory {
    // capture-side inflows
    PointCapturePower,
    PointCaptureH2,
    DacAtmospheric,
    DacCombustionCapture,
    SynfuelRecapture,
    /// CO2 feed drawn out of the captured stream by synfuel plants
    /// (negative entries).
    SynfuelFeedDraw,
    // atmospheric outflows
    EmitPower,
    EmitH2,
    EmitDacVent,
    EmitSynfuelProcess,
    EmitSynfuelCombustion,
    EmitByproductCombustion,
    EmitConventionalCombustion,
    // non-atmospheric sink
    Sequestered,
}

impl CarbonCategory {
    pub fn label(self) -> &'static str {
        match self {
            CarbonCategory::PointCapturePower => "point_capture_power",
            CarbonCategory::PointCaptureH2 => "point_capture_h2",
            CarbonCategory::DacAtmospheric => "dac_atmospheric_capture",
            CarbonCategory::DacCombustionCapture => "dac_combustion_capture",
            CarbonCategory::SynfuelRecapture => "synfuel_recapture",
            CarbonCategory::SynfuelFeedDraw => "synfuel_feed_draw",
            CarbonCategory::EmitPower => "emissions_power",
            CarbonCategory::EmitH2 => "emissions_h2",
            CarbonCategory::EmitDacVent => "emissions_dac_vent",
            CarbonCategory::EmitSynfuelProcess => "emissions_synfuel_process",
            CarbonCategory::EmitSynfuelCombustion => "emissions_synfuel_combustion",
            CarbonCategory::EmitByproductCombustion => "emissions_byproduct_combustion",
            CarbonCategory::EmitConventionalCombustion => "emissions_conventional_combustion",
            CarbonCategory::Sequestered => "sequestered",
        }
    }

    /// True for CO2 released to the atmosphere.
    pub fn is_atmospheric_emission(self) -> bool {
        matches!(
            self,
            CarbonCategory::EmitPower
                | CarbonCategory::EmitH2
                | CarbonCategory::EmitDacVent
                | CarbonCategory::EmitSynfuelProcess
                | CarbonCategory::EmitSynfuelCombustion
                | CarbonCategory::EmitByproductCombustion
                | CarbonCategory::EmitConventionalCombustion
        )
    }

    pub fn all() -> [CarbonCategory; 14] {
        [
            CarbonCategory::PointCapturePower,
            CarbonCategory::PointCaptureH2,
            CarbonCategory::DacAtmospheric,
            CarbonCategory::DacCombustionCapture,
            CarbonCategory::SynfuelRecapture,
            CarbonCategory::SynfuelFeedDraw,
            CarbonCategory::EmitPower,
            CarbonCategory::EmitH2,
            CarbonCategory::EmitDacVent,
            CarbonCategory::EmitSynfuelProcess,
            CarbonCategory::EmitSynfuelCombustion,
            CarbonCategory::EmitByproductCombustion,
            CarbonCategory::EmitConventionalCombustion,
            CarbonCategory::Sequestered,
        ]
    }
}

/// Column indices for a technology with one capacity and a dispatch series.
#[derive(Debug, Clone)]
pub struct CapDispatch {
    pub cap: usize,
    pub new: usize,
    pub dispatch: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct StorageIdx {
    pub power_cap: usize,
    pub power_new: usize,
    pub energy_cap: usize,
    pub charge: Vec<usize>,
    pub discharge: Vec<usize>,
    pub soc: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct LineIdx {
    pub cap: usize,
    pub new: usize,
    pub fwd: Vec<usize>,
    pub bwd: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct G2pIdx {
    pub cap: usize,
    pub new: usize,
    pub burn: Vec<usize>,
}

/// Column lookup tables for every modeled element, in system declaration
/// order. Reporting walks these instead of parsing names.
#[derive(Debug, Clone, Default)]
pub struct ModelIndex {
    pub thermal: Vec<CapDispatch>,
    pub vre: Vec<CapDispatch>,
    pub storage: Vec<StorageIdx>,
    pub lines: Vec<LineIdx>,
    pub h2: Vec<CapDispatch>,
    pub h2_storage: Vec<StorageIdx>,
    pub h2_pipes: Vec<LineIdx>,
    pub co2_pipes: Vec<LineIdx>,
    pub dac: Vec<CapDispatch>,
    pub g2p: Vec<G2pIdx>,
    /// Injection columns per zone index; empty when storage is unavailable.
    pub inject: Vec<Vec<usize>>,
    pub synfuel: Vec<CapDispatch>,
    /// fuel -> [zone][t] purchase columns.
    pub conventional: BTreeMap<String, Vec<Vec<usize>>>,
}

/// Mutable assembly state threaded through the chain builders.
pub struct ModelContext<'a> {
    pub system: &'a EnergySystem,
    pub lp: LinearProgram,
    pub steps: usize,
    pub weights: Vec<f64>,
    pub power_balance: Vec<Vec<RowId>>,
    pub h2_balance: Vec<Vec<RowId>>,
    pub co2_balance: Vec<Vec<RowId>>,
    /// (column, category, annual tonnes per unit) CO2 ledger terms.
    pub ledger: Vec<(usize, CarbonCategory, f64)>,
    /// (column, category, EUR/y per unit) objective attribution.
    pub costs: Vec<(usize, CostCategory, f64)>,
    /// fuel -> (column, annual MWh per unit) consumption terms.
    pub fuel_use: BTreeMap<String, Vec<(usize, f64)>>,
    pub fuel_supply_rows: BTreeMap<String, usize>,
    pub mandate_row: Option<(String, usize)>,
    pub cap_row: Option<usize>,
    pub index: ModelIndex,
    zone_lookup: HashMap<String, usize>,
}

impl<'a> ModelContext<'a> {
    pub fn new(system: &'a EnergySystem) -> Result<Self> {
        let steps = system.grid.num_steps();
        let weights = system.grid.step_weights();
        let mut lp = LinearProgram::new();
        let mut zone_lookup = HashMap::new();
        for (z, zone) in system.zones.iter().enumerate() {
            zone_lookup.insert(zone.id.clone(), z);
        }
        let zero = vec![0.0; steps];
        let mut power_balance = Vec::with_capacity(system.zones.len());
        let mut h2_balance = Vec::with_capacity(system.zones.len());
        let mut co2_balance = Vec::with_capacity(system.zones.len());
        for zone in &system.zones {
            let elec = system.demand_elec_mwh.get(&zone.id).unwrap_or(&zero);
            let h2 = system.demand_h2_t.get(&zone.id).unwrap_or(&zero);
            let mut p = Vec::with_capacity(steps);
            let mut h = Vec::with_capacity(steps);
            let mut c = Vec::with_capacity(steps);
            for t in 0..steps {
                p.push(lp.add_row(
                    format!("bal_power/{}/t{t:04}", zone.id),
                    Sense::Eq,
                    elec[t],
                )?);
                h.push(lp.add_row(format!("bal_h2/{}/t{t:04}", zone.id), Sense::Eq, h2[t])?);
                c.push(lp.add_row(format!("bal_co2/{}/t{t:04}", zone.id), Sense::Eq, 0.0)?);
            }
            power_balance.push(p);
            h2_balance.push(h);
            co2_balance.push(c);
        }
        Ok(ModelContext {
            system,
            lp,
            steps,
            weights,
            power_balance,
            h2_balance,
            co2_balance,
            ledger: Vec::new(),
            costs: Vec::new(),
            fuel_use: BTreeMap::new(),
            fuel_supply_rows: BTreeMap::new(),
            mandate_row: None,
            cap_row: None,
            index: ModelIndex::default(),
            zone_lookup,
        })
    }

    pub fn zone_index(&self, id: &str) -> Result<usize> {
        self.zone_lookup
            .get(id)
            .copied()
            .ok_or_else(|| Error::Scenario(format!("unknown zone '{id}'")))
    }

    /// Attach an objective coefficient and remember its category.
    pub fn add_cost(&mut self, col: usize, category: CostCategory, coeff: f64) {
        if coeff != 0.0 {
            self.lp.add_objective(crate::lp::ColId(col), coeff);
            self.costs.push((col, category, coeff));
        }
    }

    pub fn add_carbon(&mut self, category: CarbonCategory, col: usize, annual_t_per_unit: f64) {
        if annual_t_per_unit != 0.0 {
            self.ledger.push((col, category, annual_t_per_unit));
        }
    }

    pub fn add_fuel_use(&mut self, fuel: &str, col: usize, annual_mwh_per_unit: f64) {
        if annual_mwh_per_unit != 0.0 {
            self.fuel_use
                .entry(fuel.to_string())
                .or_default()
                .push((col, annual_mwh_per_unit));
        }
    }

    /// Capacity pattern shared by every investable element: a total-capacity
    /// column carrying FOM with the brownfield floor as lower bound, a
    /// new-build column carrying annualized capex, and the linking row
    /// total − new = existing.
    pub fn add_capacity(
        &mut self,
        name: &str,
        existing: f64,
        max_total: f64,
        capex_annualized: f64,
        fom: f64,
        category: CostCategory,
    ) -> Result<(usize, usize)> {
        let cap = self
            .lp
            .add_column(format!("cap/{name}"), existing, max_total, 0.0)?;
        let new = self.lp.add_column(
            format!("new/{name}"),
            0.0,
            (max_total - existing).max(0.0),
            0.0,
        )?;
        let link = self
            .lp
            .add_row(format!("brownfield/{name}"), Sense::Eq, existing)?;
        self.lp.add_coeff(link, cap, 1.0);
        self.lp.add_coeff(link, new, -1.0);
        self.add_cost(cap.index(), category, fom);
        self.add_cost(new.index(), category, capex_annualized);
        Ok((cap.index(), new.index()))
    }

    pub fn into_artifacts(self) -> ModelArtifacts {
        let balance_rows: Vec<usize> = self
            .power_balance
            .iter()
            .chain(&self.h2_balance)
            .chain(&self.co2_balance)
            .flatten()
            .map(|r| r.index())
            .collect();
        ModelArtifacts {
            lp: self.lp.finalize(),
            costs: self.costs,
            ledger: self.ledger,
            fuel_use: self.fuel_use,
            fuel_supply_rows: self.fuel_supply_rows,
            mandate_row: self.mandate_row,
            cap_row: self.cap_row,
            balance_rows,
            index: self.index,
        }
    }
}

/// Finalized LP plus everything reporting needs to interpret a solution.
pub struct ModelArtifacts {
    pub lp: FinalizedLp,
    pub costs: Vec<(usize, CostCategory, f64)>,
    pub ledger: Vec<(usize, CarbonCategory, f64)>,
    pub fuel_use: BTreeMap<String, Vec<(usize, f64)>>,
    pub fuel_supply_rows: BTreeMap<String, usize>,
    pub mandate_row: Option<(String, usize)>,
    /// Absent when the cap is infinite (row would be vacuous).
    pub cap_row: Option<usize>,
    /// Row indices of every power/H2/CO2 balance row.
    pub balance_rows: Vec<usize>,
    pub index: ModelIndex,
}

impl ModelArtifacts {
    /// Evaluate a recorded linear expression against solution values.
    pub fn eval(terms: &[(usize, f64)], values: &[f64]) -> f64 {
        terms.iter().map(|(c, k)| values[*c] * k).sum()
    }

    /// Annual tonnes per ledger category.
    pub fn carbon_totals(&self, values: &[f64]) -> BTreeMap<CarbonCategory, f64> {
        let mut out = BTreeMap::new();
        for (col, cat, coeff) in &self.ledger {
            *out.entry(*cat).or_insert(0.0) += values[*col] * coeff;
        }
        out
    }

    /// EUR/y per cost category.
    pub fn cost_totals(&self, values: &[f64]) -> BTreeMap<CostCategory, f64> {
        let mut out = BTreeMap::new();
        for (col, cat, coeff) in &self.costs {
            *out.entry(*cat).or_insert(0.0) += values[*col] * coeff;
        }
        out
    }
}

/// Build the complete LP for a validated system, in the documented canonical
/// order: power, hydrogen, carbon, liquid fuels, emissions cap.
pub fn assemble(system: &EnergySystem) -> Result<ModelArtifacts> {
    validate(system).into_result()?;
    let mut ctx = ModelContext::new(system)?;
    supply::build_power(&mut ctx)?;
    supply::build_hydrogen(&mut ctx)?;
    supply::build_carbon(&mut ctx)?;
    fuels::declare_synfuel_vars(&mut ctx)?;
    fuels::declare_conventional_vars(&mut ctx)?;
    fuels::build_liquid_fuel_costs(&mut ctx)?;
    fuels::build_fuel_balance(&mut ctx)?;
    let mandates = system.policy.mandates.clone();
    for m in &mandates {
        fuels::build_mandate(&mut ctx, &m.fuel, m.zeta)?;
    }
    fuels::build_coupling_terms(&mut ctx)?;
    fuels::build_fuel_emission_terms(&mut ctx)?;
    supply::build_emissions_cap(&mut ctx)?;
    Ok(ctx.into_artifacts())
}

/// Debug listing of every row and column: name, kind (first name segment),
/// zone when recognizable, time step when present.
pub fn write_audit(system: &EnergySystem, lp: &FinalizedLp, path: &Path) -> Result<()> {
    let mut tech_zone: HashMap<&str, &str> = HashMap::new();
    for t in &system.thermal {
        tech_zone.insert(&t.id, &t.zone);
    }
    for v in &system.vre {
        tech_zone.insert(&v.id, &v.zone);
    }
    for s in &system.storage {
        tech_zone.insert(&s.id, &s.zone);
    }
    for h in &system.h2_techs {
        tech_zone.insert(&h.id, &h.zone);
    }
    for s in &system.h2_storage {
        tech_zone.insert(&s.id, &s.zone);
    }
    for d in &system.dac {
        tech_zone.insert(&d.id, &d.zone);
    }
    for g in &system.g2p {
        tech_zone.insert(&g.id, &g.zone);
    }
    for f in &system.synfuel {
        tech_zone.insert(&f.id, &f.zone);
    }
    let zone_ids: std::collections::HashSet<&str> =
        system.zones.iter().map(|z| z.id.as_str()).collect();

    let describe = |name: &str| -> (String, String, String) {
        let parts: Vec<&str> = name.split('/').collect();
        let kind = parts.first().copied().unwrap_or("").to_string();
        let mut zone = String::new();
        let mut t = String::new();
        for p in &parts[1..] {
            if let Some(digits) = p.strip_prefix('t') {
                if !digits.is_empty() && digits.chars().all(|c| c.is_ascii_digit()) {
                    t = digits.trim_start_matches('0').to_string();
                    if t.is_empty() {
                        t = "0".to_string();
                    }
                    continue;
                }
            }
            if zone_ids.contains(p) {
                zone = (*p).to_string();
            } else if let Some(z) = tech_zone.get(p) {
                zone = (*z).to_string();
            }
        }
        (kind, zone, t)
    };

    let mut f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    writeln!(f, "entity,name,kind,zone,t").map_err(|e| Error::io(path, e))?;
    for row in &lp.rows {
        let (kind, zone, t) = describe(&row.name);
        writeln!(f, "row,{},{kind},{zone},{t}", row.name).map_err(|e| Error::io(path, e))?;
    }
    for col in &lp.cols {
        let (kind, zone, t) = describe(&col.name);
        writeln!(f, "col,{},{kind},{zone},{t}", col.name).map_err(|e| Error::io(path, e))?;
    }
    Ok(())
}
