use std::collections::BTreeMap;

use serde::Serialize;

use super::cech::{cech_h1_decide, CechClass};
use super::classical::ClassicalDeformation;
use super::geometry::build_zk;
use super::obstruction::{hkr_bivector, obstruction_second_order};
use super::quantization::ZkQuantization;
use crate::cochain::GridSpec;
use crate::error::{Error, Result};
use crate::ratlaurent::{rat, LaurentPoly};

/// One nonzero value `O(f, g)` of the obstruction.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableEntry {
    pub f: String,
    pub g: String,
    pub value: String,
}

/// The Čech part of a [`VerdictReport`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CechSummary {
    pub trivial: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<BTreeMap<String, String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis_coords: Option<BTreeMap<String, String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerdictReport {
    pub k: i64,
    pub i: i64,
    pub residual_monomial_table: Vec<TableEntry>,
    #[serde(rename = "bivector_frameU")]
    pub bivector_frame_u: String,
    pub cech: CechSummary,
    pub verdict: String,
    #[serde(skip)]
    pub class: CechClass,
}

impl VerdictReport {
    pub fn obstructed(&self) -> bool {
        !self.class.trivial
    }
}

/// Exponent bound of the monomial table in the report.
pub const TABLE_BOUND: i64 = 2;

/// Whether the quantization of `η = zu ∂_z∧∂_u` and the classical
/// deformation along `θ = t_i z^{i-k} ∂_u` can be combined at second order:
/// computes the obstruction, reads off its bivector and decides its class.
pub fn simultaneous_verdict(k: i64, i: i64) -> Result<VerdictReport> {
    if !(1..k).contains(&i) {
        return Err(Error::Invalid(format!("need 1 ≤ i ≤ k - 1, got k = {k}, i = {i}")));
    }
    let g = build_zk(k)?;
    let cd = ClassicalDeformation::single(k, i, 2)?;
    let q = ZkQuantization::canonical(&g)?;
    let o = obstruction_second_order(&g, &cd, &q)?;
    let mut table = Vec::new();
    let monos: Vec<LaurentPoly> = (0..=TABLE_BOUND)
        .flat_map(|a| (0..=TABLE_BOUND).map(move |b| (a, b)))
        .map(|(a, b)| LaurentPoly::mono(rat(1, 1), &[("zeta", a), ("v", b)]))
        .collect();
    for f in &monos {
        for h in &monos {
            let val = o.evaluate(&[f.clone(), h.clone()])?;
            if !val.is_zero() {
                table.push(TableEntry {
                    f: f.to_string(),
                    g: h.to_string(),
                    value: val.to_string(),
                });
            }
        }
    }
    let hkr = hkr_bivector(&g, &o, &GridSpec::full(2))?;
    let class = cech_h1_decide(&g, &hkr.frame_u)?;
    let to_strings = |m: &BTreeMap<i64, LaurentPoly>| {
        m.iter().map(|(e, p)| (format!("z^{e}"), p.to_string())).collect::<BTreeMap<_, _>>()
    };
    let cech = if class.trivial {
        CechSummary {
            trivial: true,
            decomposition: Some(BTreeMap::from([
                ("p_U".to_string(), class.p_u.to_string()),
                ("p_V".to_string(), class.p_v.to_string()),
            ])),
            basis_coords: None,
        }
    } else {
        CechSummary {
            trivial: false,
            decomposition: None,
            basis_coords: Some(to_strings(&class.basis_coords)),
        }
    };
    Ok(VerdictReport {
        k,
        i,
        residual_monomial_table: table,
        bivector_frame_u: hkr.frame_u.to_string(),
        verdict: if class.trivial { "unobstructed" } else { "obstructed" }.to_string(),
        cech,
        class,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert!(simultaneous_verdict(4, 2).unwrap().obstructed());
        assert!(!simultaneous_verdict(4, 1).unwrap().obstructed());
        assert!(!simultaneous_verdict(2, 1).unwrap().obstructed());
        assert!(simultaneous_verdict(4, 4).is_err());
    }

    #[test]
    fn report_shape() {
        let r = simultaneous_verdict(5, 2).unwrap();
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["verdict"], "obstructed");
        assert_eq!(json["bivector_frameU"], "-t2*z^-2");
        assert_eq!(json["cech"]["basis_coords"]["z^-2"], "-t2");
        assert!(json["cech"].get("decomposition").is_none());
        assert!(!r.residual_monomial_table.is_empty());
    }

    #[test]
    fn verdict_table() {
        for k in 1..=8 {
            for i in 1..k {
                let r = simultaneous_verdict(k, i).unwrap();
                assert_eq!(r.obstructed(), k >= 4 && 1 < i && i < k - 1, "k = {k}, i = {i}");
                assert!(r.class.window_stable);
            }
        }
    }
}
