use clap::{Args, Subcommand};
use schemespinlab::knotstat::{apply_r2, invariance_check, partition_function, star_triangle_check};
use schemespinlab::Mat;
use serde_json::json;

use super::{exact, to_value};
use crate::input::{parse_moves, read_graph, read_matrix};
use crate::{CmdResult, Ctx, Failure};

#[derive(Args)]
pub struct Weights {
    /// Weight matrix on positive edges.
    #[arg(long)]
    wplus: String,
    /// Weight matrix on negative edges; the Schur inverse of W⁺ when omitted.
    #[arg(long)]
    wminus: Option<String>,
}

#[derive(Subcommand)]
pub enum KnotCmd {
    /// Partition function of a signed graph.
    Z {
        #[arg(long)]
        graph: String,
        #[command(flatten)]
        weights: Weights,
    },
    /// Apply one R2 move, merging two vertices joined by oppositely signed edges.
    R2 {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        u: usize,
        #[arg(long)]
        v: usize,
    },
    /// Compare partition functions before and after a sequence of R2 moves.
    Invariance {
        #[arg(long)]
        graph: String,
        /// Moves as u-v pairs, comma separated.
        #[arg(long)]
        moves: String,
        #[command(flatten)]
        weights: Weights,
    },
    /// Compare the star and triangle graphs: Z_star = ±√n·Z_triangle.
    Star {
        #[command(flatten)]
        weights: Weights,
    },
}

impl KnotCmd {
    pub fn verb(&self) -> &'static str {
        match self {
            KnotCmd::Z { .. } => "z",
            KnotCmd::R2 { .. } => "r2",
            KnotCmd::Invariance { .. } => "invariance",
            KnotCmd::Star { .. } => "star",
        }
    }
}

fn weights(ctx: &mut Ctx, w: &Weights) -> Result<(Mat, Mat), Failure> {
    ctx.input("wplus", w.wplus.as_str());
    let wp = read_matrix(ctx, &w.wplus)?;
    let wm = match &w.wminus {
        Some(path) => {
            ctx.input("wminus", path.as_str());
            read_matrix(ctx, path)?
        }
        None => wp.schur_inverse()?,
    };
    Ok((wp, wm))
}

pub fn run(ctx: &mut Ctx, c: &KnotCmd) -> CmdResult {
    match c {
        KnotCmd::Z { graph, weights: w } => {
            ctx.input("graph", graph.as_str());
            let g = read_graph(ctx, graph)?;
            let (wp, wm) = weights(ctx, w)?;
            let z = partition_function(&g, &wp, &wm, &ctx.settings)?;
            ctx.result(json!({"z": exact(&z), "z_text": z.to_string()}));
        }
        KnotCmd::R2 { graph, u, v } => {
            ctx.input("graph", graph.as_str());
            ctx.input("u", *u);
            ctx.input("v", *v);
            let g = read_graph(ctx, graph)?;
            let h = apply_r2(&g, *u, *v)?;
            ctx.result(json!({"graph": h.to_json()}));
        }
        KnotCmd::Invariance { graph, moves, weights: w } => {
            ctx.input("graph", graph.as_str());
            ctx.input("moves", moves.as_str());
            let g = read_graph(ctx, graph)?;
            let mv = parse_moves(moves)?;
            let (wp, wm) = weights(ctx, w)?;
            let r = invariance_check(&g, &mv, &wp, &wm, &ctx.settings)?;
            ctx.residual("invariance", r.residual);
            ctx.set_pass(r.pass);
            ctx.result(to_value(&r));
        }
        KnotCmd::Star { weights: w } => {
            let (wp, wm) = weights(ctx, w)?;
            let r = star_triangle_check(&wp, &wm, &ctx.settings)?;
            ctx.residual("star_plus", r.residual_plus);
            ctx.residual("star_minus", r.residual_minus);
            ctx.set_pass(r.sign.is_some());
            ctx.result(to_value(&r));
        }
    }
    Ok(())
}
