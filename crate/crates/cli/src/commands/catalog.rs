use clap::Subcommand;
use schemespinlab::catalog::{get, list, run_golden};
use serde_json::json;

use super::to_value;
use crate::{CmdResult, Ctx};

#[derive(Subcommand)]
pub enum CatalogCmd {
    /// List the built-in entries.
    List,
    /// Print one entry.
    Show { id: String },
    /// Recompute an entry's expected values and compare.
    Golden { id: String },
}

impl CatalogCmd {
    pub fn verb(&self) -> &'static str {
        match self {
            CatalogCmd::List => "list",
            CatalogCmd::Show { .. } => "show",
            CatalogCmd::Golden { .. } => "golden",
        }
    }
}

pub fn run(ctx: &mut Ctx, c: &CatalogCmd) -> CmdResult {
    match c {
        CatalogCmd::List => {
            for id in list() {
                let e = get(&id)?;
                ctx.result(json!({"id": e.id, "kind": to_value(&e.kind), "description": e.description}));
            }
        }
        CatalogCmd::Show { id } => {
            ctx.input("id", id.as_str());
            let e = get(id)?;
            ctx.note_catalog(id);
            ctx.result(to_value(&e));
        }
        CatalogCmd::Golden { id } => {
            ctx.input("id", id.as_str());
            ctx.note_catalog(id);
            let r = run_golden(id, &ctx.settings)?;
            ctx.set_pass(r.pass);
            ctx.result(to_value(&r));
        }
    }
    Ok(())
}
