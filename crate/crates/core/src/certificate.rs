//! From the difference enclosure to validated enclosures of the Stokes
//! constant, and the machine-readable certificate.

use serde::Serialize;

use crate::bounds::{b_constant, ConstantTable};
use crate::error::{Error, Gate, Result};
use crate::interval::round::{add_up, mul_up};
use crate::interval::{ComplexInterval, Interval};
use crate::problem::ProblemSpec;
use crate::shooting::DeltaEnclosure;
use crate::thresholds::RhoThresholds;

/// Gaussian integer `(re, im)`.
pub type Gauss = (i64, i64);

fn gmul(a: Gauss, b: Gauss) -> Gauss {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn gadd(a: Gauss, b: Gauss) -> Gauss {
    (a.0 + b.0, a.1 + b.1)
}

fn gabs(a: Gauss) -> Interval {
    match a {
        (x, 0) | (0, x) => Interval::point(x.unsigned_abs() as f64),
        (x, y) => (Interval::point(x as f64).sqr() + Interval::point(y as f64).sqr())
            .sqrt()
            .expect("positive"),
    }
}

/// Laurent polynomial in `1/s`: entry `k` multiplies `s^-k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Laurent(pub Vec<Gauss>);

impl Laurent {
    fn from_terms(first: usize, c: &[Gauss]) -> Laurent {
        let mut v = vec![(0, 0); first];
        v.extend_from_slice(c);
        Laurent(v)
    }

    fn coeff(&self, k: usize) -> Gauss {
        self.0.get(k).copied().unwrap_or((0, 0))
    }

    fn mul(&self, o: &Laurent) -> Laurent {
        let mut v = vec![(0, 0); self.0.len() + o.0.len()];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                v[i + j] = gadd(v[i + j], gmul(*a, *b));
            }
        }
        Laurent(v).trimmed()
    }

    fn add(&self, o: &Laurent) -> Laurent {
        let n = self.0.len().max(o.0.len());
        Laurent((0..n).map(|k| gadd(self.coeff(k), o.coeff(k))).collect()).trimmed()
    }

    fn scale(&self, c: Gauss) -> Laurent {
        Laurent(self.0.iter().map(|a| gmul(*a, c)).collect()).trimmed()
    }

    /// Multiply by `s^shift` (negative shift lowers the power of s).
    fn shift(&self, by: i64) -> Laurent {
        let mut v = self.0.clone();
        if by < 0 {
            let mut z = vec![(0, 0); (-by) as usize];
            z.append(&mut v);
            Laurent(z)
        } else {
            assert!(
                v[..by as usize].iter().all(|c| *c == (0, 0)),
                "positive power of s"
            );
            Laurent(v[by as usize..].to_vec())
        }
    }

    fn trimmed(mut self) -> Laurent {
        while self.0.len() > 1 && self.0.last() == Some(&(0, 0)) {
            self.0.pop();
        }
        self
    }

    /// Nonzero terms as `(power of 1/s, coefficient)`.
    pub fn terms(&self) -> Vec<(usize, Gauss)> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != (0, 0))
            .map(|(k, c)| (k, *c))
            .collect()
    }
}

/// Per-problem data of the refined Stokes-constant estimate.
///
/// `phi_star`, `varphi_star` hold the coefficients of `s^-3, s^-4, s^-5` of
/// the truncated asymptotic expansion of the distinguished solutions. The
/// coefficient of `s^-6` (modulus `dropped`) and the integration-by-parts
/// remainder `remainder_coeff * B_8 |s|^-6` are carried by the error bound.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RefinementData {
    /// `K11 = i b1/s^4 + b2/s^5 + i b3/s^6 + b4/s^7 + ...`
    pub beta: [i64; 4],
    pub phi_star: [Gauss; 3],
    pub varphi_star: [Gauss; 3],
    pub dropped: i64,
    pub remainder_coeff: i64,
}

impl RefinementData {
    /// First example. The expansion is the formal solution of
    /// `phi' = -(i - 1/s) phi - s^-3`, `varphi' = (i + 1/s) varphi - s^-3`.
    pub fn example1() -> Self {
        RefinementData {
            beta: [1, 2, -28, 48],
            phi_star: [(0, 1), (4, 0), (0, -20)],
            varphi_star: [(0, -1), (4, 0), (0, 20)],
            dropped: 120,
            remainder_coeff: 4 * 5 * 6 * 7,
        }
    }

    pub fn phi(&self) -> Laurent {
        Laurent::from_terms(3, &self.phi_star)
    }

    pub fn varphi(&self) -> Laurent {
        Laurent::from_terms(3, &self.varphi_star)
    }

    /// `phi* varphi*`.
    pub fn product(&self) -> Laurent {
        self.phi().mul(&self.varphi())
    }

    /// Leading part of `d S1/d phi` at the expansion:
    /// `2 varphi* phi* s^2 (i - 1/s) + varphi*/s`.
    pub fn k11_polynomial(&self) -> Laurent {
        let s2p = self.product().shift(2);
        let i_minus = s2p.scale((0, 1)).add(&s2p.shift(-1).scale((-1, 0)));
        i_minus.scale((2, 0)).add(&self.varphi().shift(-1))
    }

    /// Exact check that `beta` are the `s^-4 .. s^-7` coefficients of
    /// [`Self::k11_polynomial`] and that nothing of lower order survives.
    pub fn check(&self) -> Result<()> {
        let k = self.k11_polynomial();
        let [b1, b2, b3, b4] = self.beta;
        let want = [(4, (0, b1)), (5, (b2, 0)), (6, (0, b3)), (7, (b4, 0))];
        for (pow, c) in want {
            if k.coeff(pow) != c {
                return Err(Error::InvalidInput(format!(
                    "refinement coefficient of s^-{pow} is {:?}, expected {:?}",
                    k.coeff(pow),
                    c
                )));
            }
        }
        if (0..4).any(|p| k.coeff(p) != (0, 0)) {
            return Err(Error::InvalidInput(
                "refinement expansion has low-order terms".into(),
            ));
        }
        Ok(())
    }

    /// `M*(rho)`: `|phi*|, |varphi*| <= M* |s|^-3` for `|s| >= rho`,
    /// including the dropped `s^-6` term.
    pub fn m_star(&self, rho: Interval) -> Interval {
        let one_side = |c: &[Gauss; 3]| {
            let mut acc = Interval::point(self.dropped as f64) / rho.powi(3);
            for (j, g) in c.iter().enumerate() {
                acc += gabs(*g) / rho.powi(j as u32);
            }
            acc
        };
        one_side(&self.phi_star).max(&one_side(&self.varphi_star))
    }

    /// `B14`: bound of the `s^-8` and higher terms of the polynomial, times `|s|^8`.
    pub fn tail_bound(&self, rho: Interval) -> Interval {
        let mut acc = Interval::ZERO;
        for (k, c) in self.k11_polynomial().terms() {
            if k >= 8 {
                acc += gabs(c) / rho.powi(k as u32 - 8);
            }
        }
        acc
    }

    /// `1 - i int_{-inf}^{-rho} K(ir) dr` for the polynomial part of K11,
    /// i.e. `1 + b1/(3 rho^3) + b2/(4 rho^4) - b3/(5 rho^5) - b4/(6 rho^6)`.
    pub fn series_factor(&self, rho: Interval) -> ComplexInterval {
        let mut acc = ComplexInterval::ONE;
        for (k, c) in self
            .k11_polynomial()
            .terms()
            .into_iter()
            .filter(|(k, _)| (4..=7).contains(k))
        {
            // -i c i^{-k} (-1)^{k-1} / ((1-k) rho^{k-1})
            let i_pow_neg: Gauss = [(1, 0), (0, -1), (-1, 0), (0, 1)][k % 4];
            let sign = if (k - 1) % 2 == 0 { 1 } else { -1 };
            let g = gmul(gmul((0, -1), c), i_pow_neg);
            let g = (g.0 * sign, g.1 * sign);
            let den = Interval::point(1.0 - k as f64) * rho.powi(k as u32 - 1);
            let term = ComplexInterval::new(
                Interval::point(g.0 as f64) / den,
                Interval::point(g.1 as f64) / den,
            );
            acc = acc + term;
        }
        acc
    }
}

/// `kappa0 = i e^{alpha(rho - i h0 log rho - h0 pi/2)} dphi / rho`.
pub fn kappa0(
    p: &ProblemSpec,
    rho: Interval,
    delta_phi: ComplexInterval,
) -> Result<ComplexInterval> {
    if !(rho.lo() > 0.0) {
        return Err(Error::domain("kappa0 needs rho > 0"));
    }
    let l = &p.ledger;
    let alpha = Interval::point(l.alpha);
    let h0 = Interval::point(l.h0);
    let phase = if l.h0 == 0.0 {
        ComplexInterval::real(alpha * rho)
    } else {
        let half_pi = Interval::pi() / Interval::point(2.0);
        ComplexInterval::new(alpha * (rho - h0 * half_pi), -(alpha * h0 * rho.ln()?))
    };
    let e = phase.exp()?;
    Ok((e * delta_phi).mul_i().scale(Interval::ONE / rho))
}

/// `kappa0 (1 + g)`, `|g| <= mbar`: both axes inflated by `mbar |kappa0|`.
pub fn theta_basic(kappa0: &ComplexInterval, mbar: Interval) -> Result<ComplexInterval> {
    if !(mbar.hi() < 1.0) || !(mbar.lo() >= 0.0) {
        return Err(Error::Threshold {
            gate: Gate::RelativeError,
            rho_lo: f64::NAN,
            rho_hi: f64::NAN,
            detail: format!("Mbar = {mbar} not in [0, 1)"),
        });
    }
    Ok(kappa0.inflate(mul_up(mbar.hi(), kappa0.abs_upper())))
}

/// The refined enclosure and its error budget.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RefinedTheta {
    pub value: ComplexInterval,
    pub series_factor: ComplexInterval,
    pub m_star: Interval,
    pub b: Interval,
    pub r: Interval,
    pub b11: Interval,
    pub b12: Interval,
    pub b13: Interval,
    pub b14: Interval,
    pub error_series: f64,
    pub error_contraction: f64,
    pub error_total: f64,
}

pub fn theta_refined(
    p: &ProblemSpec,
    table: &ConstantTable,
    kappa0: &ComplexInterval,
) -> Result<RefinedTheta> {
    let data = p
        .refinement
        .as_ref()
        .ok_or_else(|| Error::NotApplicable(format!("no refinement data for `{}`", p.name)))?;
    if p.ledger.h0 != 0.0 {
        return Err(Error::NotApplicable("refinement requires h0 = 0".into()));
    }
    data.check()?;
    let rho = table.rho;
    let one = Interval::ONE;
    let pt = Interval::point;
    let m0 = table.m0;
    let m_star = data.m_star(rho);
    if !(m_star.hi() <= m0.lo()) {
        return Err(Error::Threshold {
            gate: Gate::SeriesRadius,
            rho_lo: rho.lo(),
            rho_hi: rho.hi(),
            detail: format!("M* = {m_star} exceeds M0 = {m0}"),
        });
    }
    let grow = one + one / rho;
    let rho4 = rho.powi(4);

    let b8 = b_constant(8)?;
    let b = b8 * (table.m11[3] + table.m12[2]) * m0
        + pt(data.remainder_coeff as f64) * b8
        + pt(data.dropped as f64);

    let q0 = m0.sqr() / rho4;
    let e0 = one - q0;
    let qs = m_star.sqr() / rho4;
    let es = one - qs;
    if !(e0.lo() > 0.0) || !(es.lo() > 0.0) {
        return Err(Error::Threshold {
            gate: Gate::SeriesRadius,
            rho_lo: rho.lo(),
            rho_hi: rho.hi(),
            detail: "1 - M^2/rho^4 not positive".into(),
        });
    }
    let r = (one + pt(4.0) * m0 * grow + pt(3.0) * q0) / e0.powi(3);
    let lin = pt(2.0) * m_star * grow + one;
    let b11 = m_star.powi(4) * grow / es.sqr();
    let b12 = m_star.powi(5) * lin * (pt(3.0) + pt(2.0) * qs) / (rho4 * es.sqr());
    let b13 = pt(2.0) * m_star.powi(3) * lin;
    let b14 = data.tail_bound(rho);

    let k_abs = kappa0.abs_upper();
    let es_rel =
        b * r / (pt(6.0) * rho.powi(6)) + (b11 + b12 + b13 + b14) / (pt(7.0) * rho.powi(7));
    let error_series = mul_up(k_abs, es_rel.hi());
    let a = table.a;
    let e_theta = table.a1 * a / (one - a);
    let error_contraction = mul_up(k_abs, e_theta.hi());
    let error_total = add_up(error_series, error_contraction);

    let factor = data.series_factor(rho);
    let value = (*kappa0 * factor).inflate(error_total);
    Ok(RefinedTheta {
        value,
        series_factor: factor,
        m_star,
        b,
        r,
        b11,
        b12,
        b13,
        b14,
        error_series,
        error_contraction,
        error_total,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Conclusion {
    NonzeroCertified,
    Inconclusive,
}

pub fn conclude(theta_basic: &ComplexInterval, delta_nonzero: bool) -> Conclusion {
    if delta_nonzero || !theta_basic.contains_zero() {
        Conclusion::NonzeroCertified
    } else {
        Conclusion::Inconclusive
    }
}

/// One labeled constant of the certificate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LabeledValue {
    pub key: &'static str,
    pub description: &'static str,
    pub value: Interval,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StokesCertificate {
    pub schema_version: u32,
    pub problem: String,
    pub tool: ToolInfo,
    pub parameters: serde_json::Value,
    pub thresholds: RhoThresholds,
    pub table: Vec<LabeledValue>,
    pub delta: DeltaEnclosure,
    pub kappa0: ComplexInterval,
    pub mbar: Interval,
    pub theta_basic: ComplexInterval,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_refined: Option<RefinedTheta>,
    pub conclusion: Conclusion,
    pub notes: Vec<String>,
}

pub const SCHEMA_VERSION: u32 = 1;

/// Standard notes recorded with every certificate.
pub fn standard_notes(refined: bool) -> Vec<String> {
    let mut n = vec![
        "theta_basic: the disc |Theta - kappa0| <= Mbar |kappa0| is enclosed by its \
         circumscribed rectangle"
            .to_string(),
        "the (x, y) initial balls are enclosed by coordinate hypercubes".to_string(),
        "A2 is the larger of the two weight pairings of the second component bound".to_string(),
        "interval endpoints are shortest round-trip decimal strings of binary64 values".to_string(),
    ];
    if refined {
        n.push(
            "refined estimate: series error bounds use |kappa0|; the expansion of the \
             solutions is truncated after s^-5, the s^-6 coefficient and the \
             integration-by-parts remainder 840 B8 |s|^-6 are carried in B"
                .to_string(),
        );
        n.push("refined error disc enclosed by inflating both axes".to_string());
    }
    n
}

impl StokesCertificate {
    #[allow(clippy::too_many_arguments)]
    pub fn assemble(
        p: &ProblemSpec,
        parameters: serde_json::Value,
        thresholds: RhoThresholds,
        table: &ConstantTable,
        delta: DeltaEnclosure,
        kappa0: ComplexInterval,
        theta_basic: ComplexInterval,
        theta_refined: Option<RefinedTheta>,
    ) -> StokesCertificate {
        let conclusion = conclude(&theta_basic, delta.nonzero_certified);
        let notes = standard_notes(theta_refined.is_some());
        StokesCertificate {
            schema_version: SCHEMA_VERSION,
            problem: p.name.clone(),
            tool: ToolInfo {
                name: env!("CARGO_PKG_NAME"),
                version: env!("CARGO_PKG_VERSION"),
            },
            parameters,
            thresholds,
            table: table
                .labeled()
                .into_iter()
                .map(|(key, description, value)| LabeledValue {
                    key,
                    description,
                    value,
                })
                .collect(),
            delta,
            kappa0,
            mbar: table.mbar,
            theta_basic,
            theta_refined,
            conclusion,
            notes,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}
