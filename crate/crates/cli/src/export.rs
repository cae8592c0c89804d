//! `aftsynth export`: write the translated network for the external checker.

use std::fs;

use aftsynth_core::imitator::export_model;

use crate::load::{self, Failure, EXIT_OK};
use crate::{ExportArgs, Format};

pub fn run(args: &ExportArgs) -> Result<u8, Failure> {
    let tree = load::load_tree_or_fail(&args.file, Format::Text)?;
    let out = load::translate_or_fail(&tree)?;
    let model = export_model(&out);
    match &args.output {
        Some(path) => fs::write(path, &model)
            .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?,
        None => print!("{model}"),
    }
    Ok(EXIT_OK)
}
