use std::path::Path;

use crate::catalog;
use crate::error::CliError;
use crate::output::{num, Context, CsvTable};
use crate::Format;

use super::{out_path, report_written};

pub fn run<const D: usize>(ctx: &Context, format: Format, out: Option<&Path>) -> Result<(), CliError> {
    let set = catalog::load::<D>(&ctx.config)?;
    let payload = catalog::payload(&set)?;
    match format {
        Format::Json => {
            let path = out_path(ctx, out, "mubs.json");
            ctx.write_json(&path, &payload)?;
            report_written(&path);
        }
        Format::Csv => {
            let path = out_path(ctx, out, "mubs.csv");
            let mut t = CsvTable::new(&["basis", "row", "col", "re", "im"]);
            for b in &payload.bases {
                for (i, row) in b.matrix.rows.iter().enumerate() {
                    for (j, z) in row.iter().enumerate() {
                        t.push(vec![b.label.to_string(), i.to_string(), j.to_string(), num(z.re), num(z.im)]);
                    }
                }
            }
            ctx.write_csv(&path, &t)?;
            report_written(&path);
        }
    }
    println!("d = {D}: {} bases, max unbiasedness deviation {:e}", payload.bases.len(), payload.unbiasedness.max_deviation);
    if !payload.unbiasedness.passed() {
        return Err(CliError::Verification("bases are not mutually unbiased".into()));
    }
    // The relations describe the built-in catalog; other valid sets need not obey them.
    let builtin = ctx.config.catalog.is_none();
    if let Some(g) = payload.generating_relations.as_ref().filter(|g| builtin && !g.passed()) {
        let bad: Vec<String> = g.violations().iter().map(|v| v.basis.to_string()).collect();
        return Err(CliError::Verification(format!("generating relations fail for {}", bad.join(", "))));
    }
    Ok(())
}
