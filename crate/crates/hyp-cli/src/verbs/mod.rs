mod appendix;
mod conv;
mod geometry;
mod lab;

pub use appendix::{figure1, limits, ratio_svg};
pub use conv::{conv_eval, conv_validate, ValidationSummary};
pub use geometry::{cap, lorentz};
pub use lab::{bilinear, conelimit, extremize, refine, tailbound};

use crate::cli::{Cli, Command, ConvAction};
use crate::{CliError, Report};

pub fn verb_name(c: &Command) -> &'static str {
    match c {
        Command::Conv { action: ConvAction::Eval(_) } => "conv-eval",
        Command::Conv { action: ConvAction::Validate(_) } => "conv-validate",
        Command::Figure1(_) => "figure1",
        Command::Limits(_) => "limits",
        Command::Cap(_) => "cap",
        Command::Lorentz(_) => "lorentz",
        Command::Extremize(_) => "extremize",
        Command::Bilinear(_) => "bilinear",
        Command::Refine(_) => "refine",
        Command::Tailbound(_) => "tailbound",
        Command::Conelimit(_) => "conelimit",
    }
}

pub fn dispatch(cli: &Cli) -> Result<Report, CliError> {
    let p = cli.profile;
    match &cli.command {
        Command::Conv { action: ConvAction::Eval(a) } => conv_eval(a, p),
        Command::Conv { action: ConvAction::Validate(a) } => conv_validate(a, p),
        Command::Figure1(a) => figure1(a),
        Command::Limits(a) => limits(a),
        Command::Cap(a) => cap(a),
        Command::Lorentz(a) => lorentz(a, p),
        Command::Extremize(a) => extremize(a),
        Command::Bilinear(a) => bilinear(a),
        Command::Refine(a) => refine(a),
        Command::Tailbound(a) => tailbound(a, p),
        Command::Conelimit(a) => conelimit(a, p),
    }
}

/// CSV text from a header and rows of numbers at full precision.
pub(crate) fn csv(header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> Vec<u8> {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.into_iter().map(radial_core::field::fmt17).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out.into_bytes()
}
