//! Output records and their CSV / JSON-lines renderings.

use deterrence_core::{EquilibriumOutcome, ModelParams, SecondPeriod};
use serde::Serialize;

/// `%.9g`: nine significant digits, trailing zeros stripped.
pub fn sig9(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{v:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp) as usize;
        trim_zeros(format!("{v:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa.to_string()), exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn opt(v: Option<f64>) -> String {
    v.map(sig9).unwrap_or_default()
}

pub const SWEEP_HEADER: &str =
    "alpha,beta,theta,phi,c,R,regime,x_star,entry,profit_p1,profit_p2,total,pi_A_star,pi_D_star,advantage";

/// One solved market at one entry cost.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveRecord {
    pub alpha: f64,
    pub beta: f64,
    pub theta: f64,
    pub phi: f64,
    pub c: f64,
    #[serde(rename = "R")]
    pub entry_cost: f64,
    pub regime: &'static str,
    pub x_star: f64,
    pub entry: bool,
    pub profit_p1: f64,
    pub profit_p2: f64,
    pub total: f64,
    #[serde(rename = "pi_A_star")]
    pub pi_a_star: Option<f64>,
    #[serde(rename = "pi_D_star")]
    pub pi_d_star: f64,
    pub advantage: f64,
    pub indifferent: bool,
    pub p_incumbent: f64,
    pub p_entrant: Option<f64>,
    pub q_incumbent: f64,
    pub q_entrant: Option<f64>,
    pub profit_entrant: Option<f64>,
    pub x_static: f64,
    pub x_monopoly: f64,
    pub x_tilde: f64,
    pub pi_e_max: f64,
    pub r_bar: f64,
}

impl SolveRecord {
    pub fn new(params: &ModelParams, out: &EquilibriumOutcome) -> Self {
        let (p_incumbent, p_entrant, q_incumbent, q_entrant, profit_entrant) = match out.second_period {
            SecondPeriod::Monopoly(m) => (m.price, None, m.quantity, None, None),
            SecondPeriod::Entry(e) => (
                e.p_incumbent,
                Some(e.p_entrant),
                e.q_incumbent,
                Some(e.q_entrant),
                Some(e.profit_entrant),
            ),
        };
        Self {
            alpha: params.alpha,
            beta: params.beta,
            theta: params.theta,
            phi: params.phi,
            c: params.c,
            entry_cost: out.entry_cost,
            regime: out.regime.as_str(),
            x_star: out.x_star,
            entry: out.entry,
            profit_p1: out.profit_period1,
            profit_p2: out.profit_period2_incumbent,
            total: out.total_incumbent,
            pi_a_star: out.accommodation.map(|a| a.profit),
            pi_d_star: out.deterrence.profit,
            advantage: out.profit_advantage,
            indifferent: out.indifferent,
            p_incumbent,
            p_entrant,
            q_incumbent,
            q_entrant,
            profit_entrant,
            x_static: out.constants.x_static,
            x_monopoly: out.constants.x_monopoly,
            x_tilde: out.constants.x_tilde,
            pi_e_max: out.constants.pi_e_max,
            r_bar: out.constants.r_bar,
        }
    }

    pub fn csv_row(&self) -> String {
        [
            sig9(self.alpha),
            sig9(self.beta),
            sig9(self.theta),
            sig9(self.phi),
            sig9(self.c),
            sig9(self.entry_cost),
            self.regime.to_string(),
            sig9(self.x_star),
            self.entry.to_string(),
            sig9(self.profit_p1),
            sig9(self.profit_p2),
            sig9(self.total),
            opt(self.pi_a_star),
            sig9(self.pi_d_star),
            sig9(self.advantage),
        ]
        .join(",")
    }

    /// Full-precision JSON, so a record can be fed back as a config file.
    pub fn json_line(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }

    pub fn text(&self) -> String {
        let mut lines = vec![
            format!("regime            {}", self.regime),
            format!("entry_cost        {}", sig9(self.entry_cost)),
            format!("x_star            {}", sig9(self.x_star)),
            format!("entry             {}", self.entry),
            format!("indifferent       {}", self.indifferent),
            format!("profit_period1    {}", sig9(self.profit_p1)),
            format!("profit_period2    {}", sig9(self.profit_p2)),
            format!("total             {}", sig9(self.total)),
            format!(
                "pi_A_star         {}",
                self.pi_a_star.map(sig9).unwrap_or_else(|| "none".into())
            ),
            format!("pi_D_star         {}", sig9(self.pi_d_star)),
            format!("advantage         {}", sig9(self.advantage)),
            format!("p_incumbent       {}", sig9(self.p_incumbent)),
            format!("q_incumbent       {}", sig9(self.q_incumbent)),
        ];
        if let (Some(p), Some(q), Some(pr)) = (self.p_entrant, self.q_entrant, self.profit_entrant) {
            lines.push(format!("p_entrant         {}", sig9(p)));
            lines.push(format!("q_entrant         {}", sig9(q)));
            lines.push(format!("profit_entrant    {}", sig9(pr)));
        }
        for (name, v) in [
            ("x_static", self.x_static),
            ("x_monopoly", self.x_monopoly),
            ("x_tilde", self.x_tilde),
            ("pi_e_max", self.pi_e_max),
            ("r_bar", self.r_bar),
        ] {
            lines.push(format!("{name:<18}{}", sig9(v)));
        }
        lines.join("\n")
    }
}
