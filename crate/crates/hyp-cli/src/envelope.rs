use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
    #[serde(rename = "<")]
    Below,
    #[serde(rename = ">")]
    Above,
}

/// One stated tolerance: `value relation bound`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub relation: Relation,
    pub bound: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, value: f64, relation: Relation, bound: f64) -> Self {
        let pass = match relation {
            Relation::AtMost => value <= bound,
            Relation::AtLeast => value >= bound,
            Relation::Below => value < bound,
            Relation::Above => value > bound,
        };
        Self { name: name.into(), value, relation, bound, pass }
    }

    pub fn at_most(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self::new(name, value, Relation::AtMost, bound)
    }

    pub fn at_least(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self::new(name, value, Relation::AtLeast, bound)
    }

    pub fn below(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self::new(name, value, Relation::Below, bound)
    }

    pub fn above(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self::new(name, value, Relation::Above, bound)
    }

    /// `|value - target| <= tol |target|`.
    pub fn relative(name: impl Into<String>, value: f64, target: f64, tol: f64) -> Self {
        Self::at_most(name, (value - target).abs() / target.abs(), tol)
    }

    /// A yes/no condition as `1 >= 1` or `0 >= 1`.
    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Self::at_least(name, if ok { 1.0 } else { 0.0 }, 1.0)
    }
}

/// Machine-readable result of one verb. `pass` is false exactly when some
/// check fails.
#[derive(Clone, Debug, Serialize)]
pub struct ResultEnvelope {
    pub verb: String,
    pub params: Value,
    pub values: Value,
    pub tolerances: Vec<Check>,
    pub pass: bool,
    pub notes: Vec<String>,
}

impl ResultEnvelope {
    pub fn new(verb: &str, params: Value, values: Value, tolerances: Vec<Check>, notes: Vec<String>) -> Self {
        let pass = tolerances.iter().all(|c| c.pass);
        Self { verb: verb.into(), params, values, tolerances, pass, notes }
    }

    pub fn failed(&self) -> Vec<&Check> {
        self.tolerances.iter().filter(|c| !c.pass).collect()
    }
}
