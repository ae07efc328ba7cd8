//! Orchestration: test dispatch and the simulation front end.

use crate::args::{SimulateArgs, TestArgs, TestName};
use crate::csvio::read_table;
use crate::report::{
    delta_plot_grid, diagnostics_from, rho_plot_grid, write_plot_grid, BayesFactorJson,
    GridPoint, ObservedStats, PosteriorJson, ProvenanceJson, TestResultJson, SCHEMA_VERSION,
};
use crate::CliError;
use ranklatent::inference::{
    kruskal_rho_to_rhos, posterior_summary, savage_dickey_delta, savage_dickey_rho,
};
use ranklatent::ranks::{
    matched_rank_biserial, rank_biserial, signed_rank_from_differences, spearman_rho,
    u_statistic, Sample,
};
use ranklatent::samplers::{
    ranksum_chains, signedrank_chains, spearman_chains, ChainConfig, ChainOutput, PriorSpec,
};
use ranklatent::simgen::{
    run_grid, CopulaFamily, DistributionFamily, GridTask, Scenario, SimulationGridSpec,
};

fn sample_from(values: Vec<f64>, what: &str) -> Result<Sample, CliError> {
    Sample::new(values).map_err(|e| CliError::BadData(format!("{what}: {e}")))
}

fn chain_config(args: &TestArgs) -> ChainConfig {
    ChainConfig {
        iterations: args.iterations,
        burnin: args.burnin,
        chains: args.chains,
        thin: args.thin,
        seed: args.seed,
    }
}

fn pooled_samples(chains: &[ChainOutput]) -> Vec<&[f64]> {
    chains.iter().map(|c| c.parameter_samples.as_slice()).collect()
}

pub struct RunOutput {
    pub json: String,
    pub plot_grid: Option<String>,
}

pub fn run_test(args: &TestArgs) -> Result<RunOutput, CliError> {
    let table = read_table(&args.input)?;
    let config = chain_config(args);
    config
        .validate()
        .map_err(|e| CliError::BadData(e.to_string()))?;

    let selector_error = |msg: &str| Err(CliError::BadData(msg.to_string()));

    match args.test {
        TestName::Ranksum => {
            let (x, y) = match (&args.value, &args.group, &args.x, &args.y, &args.diff) {
                (Some(value), Some(group), None, None, None) => {
                    let (_, xs, _, ys) = table.grouped_column(value, group)?;
                    (
                        sample_from(xs, "value column")?,
                        sample_from(ys, "value column")?,
                    )
                }
                (None, None, Some(cx), Some(cy), None) => (
                    sample_from(table.numeric_column(cx)?, "x column")?,
                    sample_from(table.numeric_column(cy)?, "y column")?,
                ),
                _ => {
                    return selector_error(
                        "the rank sum test needs either --value with --group, or --x with --y",
                    )
                }
            };
            let prior = PriorSpec::cauchy_on_delta(args.scale)
                .map_err(|e| CliError::BadData(e.to_string()))?;
            let u = u_statistic(&x, &y).map_err(CliError::sampler)?;
            let rb = rank_biserial(&x, &y).map_err(CliError::sampler)?;
            let chains = ranksum_chains(&x, &y, &prior, &config).map_err(CliError::sampler)?;
            let bf = savage_dickey_delta(&chains, &prior).map_err(CliError::sampler)?;
            let summary =
                posterior_summary(&pooled_samples(&chains)).map_err(CliError::sampler)?;
            let mut observed = ObservedStats::empty();
            observed.u = Some(u.u);
            observed.u_complement = Some(u.u_complement);
            observed.rank_biserial = Some(rb);
            let grid = args.plot_grid.then(|| {
                let cond: Vec<(f64, f64)> = chains
                    .iter()
                    .flat_map(|c| c.conditional_params.clone().unwrap_or_default())
                    .collect();
                delta_plot_grid(&cond, args.scale, args.grid_points)
            });
            finish(args, "ranksum", observed, &bf, summary_json("delta", &summary), &summary, None, grid)
        }
        TestName::Signedrank => {
            let differences: Vec<f64> = match (&args.value, &args.group, &args.x, &args.y, &args.diff)
            {
                (None, None, Some(cx), Some(cy), None) => {
                    let (xs, ys) = table.paired_columns(cx, cy)?;
                    xs.iter().zip(&ys).map(|(a, b)| b - a).collect()
                }
                (None, None, None, None, Some(cd)) => table.numeric_column(cd)?,
                _ => {
                    return selector_error(
                        "the signed rank test needs either --x with --y (differences y - x), or --diff",
                    )
                }
            };
            let prior = PriorSpec::cauchy_on_delta(args.scale)
                .map_err(|e| CliError::BadData(e.to_string()))?;
            let (w, decomposition) = signed_rank_from_differences(&differences);
            let mrb = matched_rank_biserial(&decomposition).map_err(CliError::sampler)?;
            let d = sample_from(differences, "differences")?;
            let chains = signedrank_chains(&d, &prior, &config).map_err(CliError::sampler)?;
            let bf = savage_dickey_delta(&chains, &prior).map_err(CliError::sampler)?;
            let summary =
                posterior_summary(&pooled_samples(&chains)).map_err(CliError::sampler)?;
            let mut observed = ObservedStats::empty();
            observed.w = Some(w);
            observed.matched_rank_biserial = Some(mrb);
            observed.dropped_zero_differences = Some(decomposition.dropped_zeros);
            let grid = args.plot_grid.then(|| {
                let cond: Vec<(f64, f64)> = chains
                    .iter()
                    .flat_map(|c| c.conditional_params.clone().unwrap_or_default())
                    .collect();
                delta_plot_grid(&cond, args.scale, args.grid_points)
            });
            finish(args, "signedrank", observed, &bf, summary_json("delta", &summary), &summary, None, grid)
        }
        TestName::Spearman => {
            let (cx, cy) = match (&args.value, &args.group, &args.x, &args.y, &args.diff) {
                (None, None, Some(cx), Some(cy), None) => (cx, cy),
                _ => return selector_error("the Spearman test needs --x and --y"),
            };
            let (xs, ys) = table.paired_columns(cx, cy)?;
            let x = sample_from(xs, "x column")?;
            let y = sample_from(ys, "y column")?;
            let prior = PriorSpec::uniform_on_rho();
            let observed_rho = spearman_rho(&x, &y).map_err(CliError::sampler)?;
            let chains = spearman_chains(&x, &y, &prior, &config).map_err(CliError::sampler)?;
            let bf = savage_dickey_rho(&chains).map_err(CliError::sampler)?;
            // report the posterior on the Spearman scale via the Kruskal
            // transform of the latent Pearson draws
            let rhos_chains: Vec<Vec<f64>> = chains
                .iter()
                .map(|c| {
                    c.parameter_samples
                        .iter()
                        .map(|r| kruskal_rho_to_rhos(*r).unwrap())
                        .collect()
                })
                .collect();
            let views: Vec<&[f64]> = rhos_chains.iter().map(|c| c.as_slice()).collect();
            let summary = posterior_summary(&views).map_err(CliError::sampler)?;
            let acc = {
                let rates: Vec<f64> = chains.iter().filter_map(|c| c.acceptance_rate).collect();
                Some(rates.iter().sum::<f64>() / rates.len() as f64)
            };
            let mut observed = ObservedStats::empty();
            observed.spearman_rho = Some(observed_rho);
            let grid = args.plot_grid.then(|| {
                let pooled: Vec<f64> = chains
                    .iter()
                    .flat_map(|c| c.parameter_samples.iter().copied())
                    .collect();
                rho_plot_grid(&pooled, args.grid_points)
            });
            finish(args, "spearman", observed, &bf, summary_json("rho_s", &summary), &summary, acc, grid)
        }
    }
}

fn summary_json(
    parameter: &'static str,
    summary: &ranklatent::inference::PosteriorSummary,
) -> PosteriorJson {
    PosteriorJson {
        parameter,
        median: summary.median,
        ci_lower: summary.ci_lower,
        ci_upper: summary.ci_upper,
    }
}

#[allow(clippy::too_many_arguments)]
fn finish(
    args: &TestArgs,
    test: &'static str,
    observed: ObservedStats,
    bf: &ranklatent::inference::BayesFactorResult,
    posterior: PosteriorJson,
    summary: &ranklatent::inference::PosteriorSummary,
    acceptance: Option<f64>,
    grid: Option<Vec<GridPoint>>,
) -> Result<RunOutput, CliError> {
    let result = TestResultJson {
        schema_version: SCHEMA_VERSION,
        test,
        observed,
        bayes_factor: BayesFactorJson::from(bf),
        posterior,
        diagnostics: diagnostics_from(summary, acceptance),
        provenance: ProvenanceJson {
            seed: args.seed,
            iterations: args.iterations,
            burnin: args.burnin,
            chains: args.chains,
            thin: args.thin,
            cauchy_scale: (test != "spearman").then_some(args.scale),
            version: env!("CARGO_PKG_VERSION"),
        },
    };
    let json = serde_json::to_string_pretty(&result).expect("result serializes");
    Ok(RunOutput {
        json,
        plot_grid: grid.as_deref().map(write_plot_grid),
    })
}

// ---------------------------------------------------------------------------
// simulation front end
// ---------------------------------------------------------------------------

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>, CliError> {
    text.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<T>()
                .map_err(|_| CliError::BadData(format!("cannot parse '{tok}' in --{what}")))
        })
        .collect()
}

fn univariate_family(name: &str) -> Result<DistributionFamily, CliError> {
    Ok(match name {
        "normal" => DistributionFamily::Normal,
        "skew-normal" => DistributionFamily::SkewNormal,
        "cauchy" => DistributionFamily::Cauchy,
        "logistic" => DistributionFamily::Logistic,
        "uniform" => DistributionFamily::Uniform,
        _ => {
            return Err(CliError::BadData(format!(
                "unknown distribution family '{name}' (expected normal, skew-normal, cauchy, logistic or uniform)"
            )))
        }
    })
}

fn copula_family(name: &str) -> Result<CopulaFamily, CliError> {
    Ok(match name {
        "gaussian" => CopulaFamily::Gaussian,
        "clayton" => CopulaFamily::Clayton,
        "frank" => CopulaFamily::Frank,
        "gumbel" => CopulaFamily::Gumbel,
        _ => {
            return Err(CliError::BadData(format!(
                "unknown copula family '{name}' (expected gaussian, clayton, frank or gumbel)"
            )))
        }
    })
}

fn scenario(name: &str) -> Result<Scenario, CliError> {
    Ok(match name {
        "same-shape" => Scenario::SameShape,
        "normal-vs-other" => Scenario::NormalVsOther,
        _ => {
            return Err(CliError::BadData(format!(
                "unknown scenario '{name}' (expected same-shape or normal-vs-other)"
            )))
        }
    })
}

pub fn run_simulation(args: &SimulateArgs) -> Result<String, CliError> {
    let effects: Vec<f64> = parse_list(&args.effects, "effects")?;
    let sizes: Vec<usize> = parse_list(&args.sizes, "sizes")?;
    let grid = SimulationGridSpec {
        effect_values: effects,
        n_values: sizes,
        replicates: args.replicates,
        seed: args.seed,
    };
    let task = match args.test {
        TestName::Ranksum => GridTask::RankSum {
            family: univariate_family(&args.family)?,
            shape: args.shape,
            scenario: scenario(&args.scenario)?,
        },
        TestName::Signedrank => GridTask::SignedRank {
            family: univariate_family(&args.family)?,
            shape: args.shape,
            scenario: scenario(&args.scenario)?,
        },
        TestName::Spearman => GridTask::Spearman {
            family: copula_family(&args.family)?,
        },
    };
    let prior = match args.test {
        TestName::Spearman => PriorSpec::uniform_on_rho(),
        _ => PriorSpec::cauchy_on_delta(args.scale)
            .map_err(|e| CliError::BadData(e.to_string()))?,
    };
    let config = ChainConfig {
        iterations: args.iterations,
        burnin: args.burnin,
        chains: args.chains,
        thin: args.thin,
        seed: 0, // per-replicate seeds are derived inside run_grid
    };
    let rows = run_grid(&grid, &task, &prior, &config).map_err(|e| match e {
        ranklatent::Error::Configuration(_) => CliError::BadData(e.to_string()),
        other => CliError::sampler(other),
    })?;
    let mut out = String::from("family,scenario,n,effect,replicate,statistic,log_bf10,comparator_log_bf10\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.family,
            r.scenario,
            r.n,
            r.effect,
            r.replicate,
            r.statistic,
            r.log_bf10,
            r.comparator_log_bf10
                .map(|v| v.to_string())
                .unwrap_or_default()
        ));
    }
    Ok(out)
}
