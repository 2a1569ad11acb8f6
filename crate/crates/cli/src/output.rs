//! Deterministic output formatting for spectra and reports.

use treespec_core::spectrum::Spectrum;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(Format::Text),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format {other:?} (text, csv, json)")),
        }
    }
}

/// Exact annotation for a closed-form eigenvalue: `(p/q)*pi^2` when the
/// squared length is rational, otherwise the coefficient and length shown
/// separately.
fn exact_annotation(spectrum: &Spectrum, k: usize) -> Option<String> {
    let entry = spectrum.lambda_exact(k)?;
    match entry.as_pi_squared_multiple() {
        Some(q) => Some(format!("({q})*pi^2")),
        None => Some(format!("({})*pi^2/({})^2", entry.coeff, entry.length)),
    }
}

pub fn render_spectrum(spectrum: &Spectrum, format: Format) -> String {
    match format {
        Format::Text => {
            let mut out = format!("# method: {}\n", spectrum.method());
            for (i, v) in spectrum.values().iter().enumerate() {
                let k = i + 1;
                match exact_annotation(spectrum, k) {
                    Some(exact) => {
                        out.push_str(&format!("lambda_{k} = {v:.12e} = {exact}\n"))
                    }
                    None => out.push_str(&format!("lambda_{k} = {v:.12e}\n")),
                }
            }
            out
        }
        Format::Csv => {
            let mut out = String::from("k,lambda\n");
            for (i, v) in spectrum.values().iter().enumerate() {
                out.push_str(&format!("{},{v:.12e}\n", i + 1));
            }
            out
        }
        Format::Json => {
            let values: Vec<f64> = spectrum.values().to_vec();
            let body = serde_json::json!({
                "method": spectrum.method().to_string(),
                "values": values,
            });
            format!("{}\n", serde_json::to_string_pretty(&body).expect("json"))
        }
    }
}
