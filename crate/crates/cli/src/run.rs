use std::fs;

use serde_json::{json, Value};

use mrt_core::gen::{
    gen_greedy_gap_example, gen_grid, gen_integrality_gap, gen_mssc_non_mrt_fixture,
    gen_random_mssc, gen_random_network, gen_tap_reduction, gen_wheel, GapFamilyParams,
};
use mrt_core::localsearch::{branch_exchange, SearchOptions};
use mrt_core::lp::{build_mssc_lp, solve_lp, SolverOptions};
use mrt_core::mssc::{
    alpha_point_round, exact_order_dp, greedy_order, instance_from_coverage, pad_to_uniform,
    parse_hypergraph, write_hypergraph, KernelSpec, MsscError, MsscInstance, Ordering, TieRule,
};
use mrt_core::netgraph::{
    build_tree_config, compute_coverage, evaluate_metrics, per_vertex_outage, EdgeId,
    MetricsReport, Network, TreeConfig, UncoveredMode,
};
use mrt_core::prep::{
    apply_switch_plan, candidate_switches, contract_tree, covered_exposure_fraction,
    greedy_add_switches, ingest_csv, ContractOptions,
};

use crate::args::{
    AddSwitchesArgs, Cli, Command, ContractArgs, GenKind, LocalSearchArgs, NetInput, OrderArgs,
    ReportArgs, Solver, Weights, WheelTree,
};
use crate::output::Sink;
use crate::CliError;

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let config = serde_json::to_value(cli).expect("arguments serialize");
    let ctx = Ctx {
        seed: cli.seed,
        mode: cli.uncovered,
    };
    let sink = || Sink::new(&cli.out_dir, config.clone());
    match &cli.command {
        Command::Validate(input) => validate(input),
        Command::Ingest(input) => ingest(&sink()?, input),
        Command::Contract(a) => contract(&sink()?, a),
        Command::AddSwitches(a) => add_switches(&sink()?, a),
        Command::Order(a) => order(&sink()?, &ctx, a),
        Command::LocalSearch(a) => local_search(&sink()?, &ctx, a),
        Command::Report(a) => report(&sink()?, &ctx, a),
        Command::Gen(g) => generate(&sink()?, &ctx, &g.kind),
    }
}

struct Ctx {
    seed: u64,
    mode: UncoveredMode,
}

fn load(input: &NetInput) -> Result<(Network, TreeConfig), CliError> {
    Ok(ingest_csv(&input.buses, &input.lines)?)
}

fn names(net: &Network, edges: &[EdgeId]) -> Vec<String> {
    edges.iter().map(|&e| net.edge(e).name.clone()).collect()
}

fn summary(net: &Network, tree: &TreeConfig) -> Value {
    let cov = compute_coverage(net, tree);
    json!({
        "vertices": net.vertex_count(),
        "edges": net.edge_count(),
        "tree_edges": tree.tree_edges().len(),
        "switches": tree.switches().len(),
        "root": net.vertex(net.root()).name,
        "total_demand": net.total_demand(),
        "uncovered_tree_edges": cov.uncovered_edges(tree).len(),
        "max_coverage": cov.max_coverage(),
        "covered_exposure": covered_exposure_fraction(net, tree),
    })
}

fn print_fields(v: &Value) {
    if let Value::Object(m) = v {
        for (k, x) in m {
            println!("{k}: {x}");
        }
    }
}

fn print_metrics(m: &MetricsReport) {
    println!("r_time: {}", m.r_time);
    println!("saidi: {}", m.saidi);
    println!("energy: {}", m.energy);
    println!("product: {}", m.product);
    println!("uncovered_exposure: {}", m.uncovered_exposure);
    for (class, mean) in &m.class_mean_outage {
        println!("mean_outage_{class}: {mean}");
    }
}

fn validate(input: &NetInput) -> Result<(), CliError> {
    let (net, tree) = load(input)?;
    print_fields(&summary(&net, &tree));
    Ok(())
}

fn ingest(sink: &Sink, input: &NetInput) -> Result<(), CliError> {
    let (net, tree) = load(input)?;
    sink.network(&net, &tree)?;
    let s = summary(&net, &tree);
    sink.json(
        "solution.json",
        json!({ "network": s, "tree": names(&net, tree.tree_edges()) }),
    )?;
    print_fields(&s);
    Ok(())
}

fn contract(sink: &Sink, a: &ContractArgs) -> Result<(), CliError> {
    let (net, tree) = load(&a.input)?;
    let out = contract_tree(
        &net,
        &tree,
        &ContractOptions {
            threshold: a.threshold,
            pre_update: a.pre_update,
        },
    )?;
    sink.network(&out.net, &out.tree)?;
    let vertex_map: serde_json::Map<String, Value> = net
        .vertices()
        .iter()
        .zip(&out.map.vertex_map)
        .map(|(v, &c)| (v.name.clone(), json!(out.net.vertex(c).name)))
        .collect();
    let result = json!({
        "vertices_before": net.vertex_count(),
        "vertices_after": out.net.vertex_count(),
        "demand_before": net.total_demand(),
        "demand_after": out.net.total_demand(),
        "dropped_switches": names(&net, &out.map.dropped_switches),
    });
    let mut payload = result.clone();
    payload["vertex_map"] = Value::Object(vertex_map);
    payload["network"] = summary(&out.net, &out.tree);
    sink.json("solution.json", payload)?;
    print_fields(&result);
    Ok(())
}

fn add_switches(sink: &Sink, a: &AddSwitchesArgs) -> Result<(), CliError> {
    let (net, tree) = load(&a.input)?;
    let cands = candidate_switches(&net, a.radius, a.cap)?;
    let plan = greedy_add_switches(&net, &tree, &cands, a.k, a.target)?;
    let (out, out_tree) = apply_switch_plan(&net, &tree, &plan)?;
    sink.network(&out, &out_tree)?;
    let first_new = net.edge_count();
    let mut rows = vec![vec![
        "0".to_string(),
        String::new(),
        String::new(),
        String::new(),
        String::new(),
        String::new(),
        String::new(),
        plan.curve[0].to_string(),
    ]];
    let mut added = Vec::new();
    for (i, s) in plan.added.iter().enumerate() {
        let name = out.edge(EdgeId(first_new + i)).name.clone();
        let (u, v) = (
            net.vertex(s.candidate.u).name.clone(),
            net.vertex(s.candidate.v).name.clone(),
        );
        rows.push(vec![
            (i + 1).to_string(),
            name.clone(),
            u.clone(),
            v.clone(),
            s.candidate.length.to_string(),
            s.score.to_string(),
            s.gain.to_string(),
            plan.curve[i + 1].to_string(),
        ]);
        added.push(json!({ "name": name, "from": u, "to": v, "length": s.candidate.length, "score": s.score }));
    }
    sink.csv(
        "curve.csv",
        &[
            "step", "switch", "from", "to", "length", "score", "gain", "coverage",
        ],
        &rows,
    )?;
    let result = json!({
        "candidates": cands.len(),
        "added": plan.added.len(),
        "coverage_before": plan.curve[0],
        "coverage_after": plan.final_coverage(),
    });
    let mut payload = result.clone();
    payload["switches"] = json!(added);
    sink.json("solution.json", payload)?;
    print_fields(&result);
    Ok(())
}

/// Outcome of one ordering run on a hypergraph.
struct Solved {
    ordering: Ordering,
    extra: Value,
}

fn solve(
    inst: &MsscInstance,
    solver: Solver,
    ctx: &Ctx,
    samples: usize,
    kernel_c: Option<usize>,
) -> Result<Solved, CliError> {
    if inst.edges().is_empty() {
        let order: Vec<usize> = (0..inst.vertex_count()).collect();
        return Ok(Solved {
            ordering: inst.evaluate(&order)?,
            extra: json!({}),
        });
    }
    let ordering = match solver {
        Solver::Greedy => greedy_order(inst, TieRule::Lexicographic)?,
        Solver::Exact => exact_order_dp(inst)?,
        Solver::Identity => inst.evaluate(&(0..inst.vertex_count()).collect::<Vec<_>>())?,
        Solver::Alpha => {
            let u = inst.uniformity();
            let c = kernel_c.unwrap_or(u);
            if c < u {
                return Err(MsscError::InvalidArgument(format!(
                    "kernel c = {c} is below the uniformity {u}"
                ))
                .into());
            }
            let padded = pad_to_uniform(inst, c)?;
            let lp = build_mssc_lp(&padded, None)?;
            let sol = solve_lp(&lp.model, &SolverOptions::default())?;
            let schedule = lp.schedule(&sol)?;
            let kernel = KernelSpec::for_uniformity(c);
            let run = alpha_point_round(&padded, &schedule, &kernel, ctx.seed, samples)?;
            let mean = run.objectives.iter().sum::<f64>() / run.objectives.len() as f64;
            return Ok(Solved {
                extra: json!({
                    "lp_objective": sol.objective,
                    "lp_iterations": sol.iterations,
                    "kernel": kernel.kind.to_string(),
                    "kernel_c": c,
                    "samples": samples,
                    "best_sample": run.best_sample,
                    "mean_sample_objective": mean,
                }),
                ordering: run.best,
            });
        }
    };
    Ok(Solved {
        ordering,
        extra: json!({}),
    })
}

fn edge_weights(net: &Network, tree: &TreeConfig, w: Weights) -> Vec<f64> {
    net.edge_ids()
        .map(|e| {
            let p = net.edge(e).failure;
            match w {
                Weights::Saidi if tree.is_tree_edge(e) => tree.flow(e) * p,
                _ => p,
            }
        })
        .collect()
}

/// Orders the switches of `tree`; returns the switch order and solver details.
fn order_network(
    net: &Network,
    tree: &TreeConfig,
    solver: Solver,
    weights: Weights,
    ctx: &Ctx,
    samples: usize,
    kernel_c: Option<usize>,
) -> Result<(Vec<EdgeId>, Value), CliError> {
    if tree.switches().is_empty() {
        return Ok((
            Vec::new(),
            json!({ "objective": 0.0, "normalized_objective": 0.0 }),
        ));
    }
    let cov = compute_coverage(net, tree);
    let ci = instance_from_coverage(net, tree, &cov, &edge_weights(net, tree, weights))?;
    let solved = solve(&ci.instance, solver, ctx, samples, kernel_c)?;
    let mut info = solved.extra;
    info["objective"] = json!(solved.ordering.objective);
    info["normalized_objective"] = json!(solved.ordering.normalized(&ci.instance));
    Ok((ci.switch_order(&solved.ordering), info))
}

fn order(sink: &Sink, ctx: &Ctx, a: &OrderArgs) -> Result<(), CliError> {
    if let Some(path) = &a.hypergraph {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let inst = parse_hypergraph(&text)?;
        let solved = solve(&inst, a.solver, ctx, a.samples, a.kernel_c)?;
        let normalized = solved.ordering.normalized(&inst);
        let labels: Vec<&str> = solved
            .ordering
            .order
            .iter()
            .map(|&v| inst.label(v))
            .collect();
        let mut payload = solved.extra;
        payload["order"] = json!(labels);
        payload["objective"] = json!(solved.ordering.objective);
        payload["normalized_objective"] = json!(normalized);
        sink.json("solution.json", payload)?;
        println!("order: {}", labels.join(" "));
        println!("objective: {}", solved.ordering.objective);
        println!("normalized_objective: {normalized}");
        return Ok(());
    }
    let (Some(buses), Some(lines)) = (&a.buses, &a.lines) else {
        unreachable!("clap requires a network or a hypergraph")
    };
    let (net, tree) = load(&NetInput {
        buses: buses.clone(),
        lines: lines.clone(),
    })?;
    let (order, info) =
        order_network(&net, &tree, a.solver, a.weights, ctx, a.samples, a.kernel_c)?;
    let metrics = evaluate_metrics(&net, &tree, &order, ctx.mode)?;
    let mut payload = info.clone();
    payload["tree"] = json!(names(&net, tree.tree_edges()));
    payload["order"] = json!(names(&net, &order));
    payload["metrics"] = json!(metrics);
    sink.json("solution.json", payload)?;
    println!("order: {}", names(&net, &order).join(" "));
    println!("objective: {}", info["objective"]);
    println!("normalized_objective: {}", info["normalized_objective"]);
    print_metrics(&metrics);
    Ok(())
}

fn local_search(sink: &Sink, ctx: &Ctx, a: &LocalSearchArgs) -> Result<(), CliError> {
    let (net, tree) = load(&a.input)?;
    let opts = SearchOptions {
        objective: a.objective,
        seed: ctx.seed,
        max_steps: a.max_steps,
        cross_term: !a.no_cross_term,
        debug_check: false,
    };
    let res = branch_exchange(&net, &tree, &opts)?;
    let rows: Vec<Vec<String>> = std::iter::once(&res.initial)
        .chain(&res.trace)
        .map(|r| {
            vec![
                r.step.to_string(),
                r.r_time.to_string(),
                r.saidi.to_string(),
                r.energy.to_string(),
                r.product.to_string(),
            ]
        })
        .collect();
    sink.csv(
        "curve.csv",
        &["step", "r_time", "saidi", "energy", "product"],
        &rows,
    )?;
    sink.network(&net, &res.tree)?;
    let metrics = evaluate_metrics(&net, &res.tree, &res.order, ctx.mode)?;
    let exchanges: Vec<Value> = res
        .trace
        .iter()
        .filter_map(|r| r.exchange)
        .map(|(e, s)| json!({ "open": net.edge(e).name, "close": net.edge(s).name }))
        .collect();
    sink.json(
        "solution.json",
        json!({
            "tree": names(&net, res.tree.tree_edges()),
            "order": names(&net, &res.order),
            "initial_objective": res.initial.objective,
            "final_objective": res.objective(),
            "accepted": res.trace.len(),
            "evaluations": res.evaluations,
            "exchanges": exchanges,
            "metrics": metrics,
        }),
    )?;
    println!("accepted: {}", res.trace.len());
    println!("initial_objective: {}", res.initial.objective);
    println!("final_objective: {}", res.objective());
    print_metrics(&metrics);
    Ok(())
}

fn report(sink: &Sink, ctx: &Ctx, a: &ReportArgs) -> Result<(), CliError> {
    let (net, tree) = load(&a.input)?;
    let order = if a.solver == Solver::Identity {
        tree.switches().to_vec()
    } else {
        order_network(&net, &tree, a.solver, a.weights, ctx, 100, None)?.0
    };
    let metrics = evaluate_metrics(&net, &tree, &order, ctx.mode)?;
    let outage = per_vertex_outage(&net, &tree, &order, ctx.mode)?;
    let rows: Vec<Vec<String>> = net
        .vertex_ids()
        .filter(|&v| v != net.root())
        .map(|v| {
            let x = net.vertex(v);
            vec![x.name.clone(), x.class.to_string(), outage[v.0].to_string()]
        })
        .collect();
    sink.csv("report.csv", &["vertex", "class", "expected_outage"], &rows)?;
    sink.json(
        "solution.json",
        json!({
            "tree": names(&net, tree.tree_edges()),
            "order": names(&net, &order),
            "metrics": metrics,
        }),
    )?;
    print_metrics(&metrics);
    Ok(())
}

fn generate(sink: &Sink, ctx: &Ctx, kind: &GenKind) -> Result<(), CliError> {
    let network = |net: &Network, tree: &TreeConfig| -> Result<(), CliError> {
        sink.network(net, tree)?;
        let s = summary(net, tree);
        sink.json("solution.json", json!({ "network": s }))?;
        print_fields(&s);
        Ok(())
    };
    let hypergraph = |inst: &MsscInstance| -> Result<(), CliError> {
        sink.text("instance.hg", &write_hypergraph(inst))?;
        println!("vertices: {}", inst.vertex_count());
        println!("hyperedges: {}", inst.edges().len());
        Ok(())
    };
    match kind {
        GenKind::Wheel { n, tree } => {
            let w = gen_wheel(*n)?;
            let edges = match tree {
                WheelTree::Spoke => &w.spoke,
                WheelTree::Wheel => &w.wheel,
            };
            let t = build_tree_config(&w.net, edges)?;
            network(&w.net, &t)
        }
        GenKind::GapExample => {
            let (net, tree) = gen_greedy_gap_example();
            network(&net, &tree)
        }
        GenKind::Grid { rows, cols } => {
            let (net, tree) = gen_grid(*rows, *cols)?;
            network(&net, &tree)
        }
        GenKind::RandomNetwork { n, extra } => {
            let (net, tree) = gen_random_network(*n, *extra, ctx.seed)?;
            network(&net, &tree)
        }
        GenKind::RandomMssc { n, m, c } => hypergraph(&gen_random_mssc(*n, *m, *c, ctx.seed)?),
        GenKind::NonMrt => hypergraph(&gen_mssc_non_mrt_fixture()),
        GenKind::IntegralityGap {
            c,
            scale,
            k,
            epsilon,
        } => {
            let g = gen_integrality_gap(&GapFamilyParams {
                c: *c,
                n_scale: *scale,
                k: *k,
                epsilon: *epsilon,
            })?;
            hypergraph(&g.instance)?;
            sink.json(
                "fractional.json",
                json!({
                    "blocks": g.blocks,
                    "dropped_blocks": g.dropped,
                    "horizon": g.horizon,
                    "cost": g.fractional_cost,
                    "x": g.fractional,
                }),
            )?;
            println!("blocks: {:?}", g.blocks);
            println!("fractional_cost: {}", g.fractional_cost);
            Ok(())
        }
        GenKind::TapReduction {
            input,
            max_vertices,
        } => {
            let (net, tree) = load(input)?;
            let red = gen_tap_reduction(&net, &tree, *max_vertices)?;
            network(&red.net, &red.tree)
        }
    }
}
