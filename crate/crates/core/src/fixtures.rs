//! Reference listings shipped with the crate. Setting `SUPERGAS_FIXTURES`
//! to a directory makes every lookup read from there instead.

use crate::error::{Error, Result};
use crate::parse::{parse_document, Document};

macro_rules! embed {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../fixtures/", $name)))),*]
    };
}

static EMBEDDED: &[(&str, &str)] = embed!(
    "prolong/total_derivative_x.sg",
    "prolong/total_derivative_t.sg",
    "prolong/total_derivative_theta1.sg",
    "prolong/total_derivative_theta2.sg",
    "prolong/omega_x.sg",
    "prolong/omega_t.sg",
    "prolong/lambda_theta1theta2.sg",
    "prolong/omega_theta1theta2.sg",
    "salg/table.txt",
    "salg/general_symmetry.sg",
    "solutions/families/l10_stationary.sg",
    "solutions/families/l11_stationary.sg",
    "solutions/families/l13_stationary.sg",
    "solutions/families/l17_linear.sg",
    "solutions/families/l1_constant.sg",
    "solutions/families/l1_general.sg",
    "solutions/families/l21_stationary.sg",
    "solutions/families/l22_singular.sg",
    "solutions/families/l23_exponential.sg",
    "solutions/families/l23_simple_wave.sg",
    "solutions/families/l3_wave.sg",
    "solutions/families/l3_wave_corrected.sg",
    "solutions/families/l3_wave_corrected_exponential.sg",
    "solutions/families/l3_wave_exponential.sg",
    "solutions/families/l4_monomial.sg",
    "solutions/families/l5_fermionic.sg",
    "solutions/families/l5_linear.sg",
    "solutions/families/l7_simple_wave.sg",
    "solutions/families/l9_fermionic.sg",
    "solutions/reductions/l1.sg",
    "solutions/reductions/l10.sg",
    "solutions/reductions/l11.sg",
    "solutions/reductions/l12.sg",
    "solutions/reductions/l13.sg",
    "solutions/reductions/l16.sg",
    "solutions/reductions/l17.sg",
    "solutions/reductions/l20.sg",
    "solutions/reductions/l21.sg",
    "solutions/reductions/l22.sg",
    "solutions/reductions/l23.sg",
    "solutions/reductions/l24.sg",
    "solutions/reductions/l3.sg",
    "solutions/reductions/l4.sg",
    "solutions/reductions/l5.sg",
    "solutions/reductions/l7.sg",
    "solutions/reductions/l8.sg",
    "solutions/reductions/l9.sg",
    "solutions/nonstandard.sg",
);

pub const ENV_VAR: &str = "SUPERGAS_FIXTURES";

pub fn names() -> impl Iterator<Item = &'static str> {
    EMBEDDED.iter().map(|(n, _)| *n)
}

pub fn text(name: &str) -> Result<String> {
    if let Ok(dir) = std::env::var(ENV_VAR) {
        let path = std::path::Path::new(&dir).join(name);
        return std::fs::read_to_string(&path).map_err(|e| Error::Fixture(format!("{}: {e}", path.display())));
    }
    EMBEDDED
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| t.to_string())
        .ok_or_else(|| Error::Fixture(format!("no fixture named `{name}`")))
}

pub fn document(name: &str) -> Result<Document> {
    parse_document(&text(name)?).map_err(|e| Error::Fixture(format!("{name}: {e}")))
}
