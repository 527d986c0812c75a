//! Corner-space construction suite: dimension bounds, nesting, commutation,
//! monotonicity and the tail estimate for the compressed approximants, at
//! the configured ambient dimension.

use specshift_core::berg::{BergOptions, BergSequence, OrthonormalBasis};
use specshift_core::interval::Interval;

use crate::config::ExperimentConfig;
use crate::gen::gen_commuting_pair;
use crate::report::{details, num, Artifact, CaseRecord};
use crate::suites::fmt;

pub fn run(cfg: &ExperimentConfig) -> anyhow::Result<(Vec<CaseRecord>, Vec<Artifact>)> {
    let mut records = Vec::new();
    let mut csv = String::from(
        "seed,case,n,op,p,approx_error,corner_commutator,compression_error,tail_bound,tail_bound_ok,corner_dim,dim_bound,min_increment_eig,max_pairwise_commutator\n",
    );
    let interval = Interval::new(0.0, 1.0)?;
    let basis = OrthonormalBasis::standard(cfg.ambient_dim)?;

    for case in 0..cfg.cases as u64 {
        let tuple = gen_commuting_pair(
            cfg.seed,
            case,
            cfg.ambient_dim,
            cfg.spectrum_law,
            &interval,
        )?;
        let seq = BergSequence::build(
            &tuple,
            &basis,
            &cfg.n_list,
            BergOptions { k_cut: cfg.k_cut },
        )?;

        // Exact dimension bound per level.
        for level in &seq.levels {
            let bound = seq.dimension_bound(level.n);
            let over = level.corner.dim.saturating_sub(bound) as f64;
            records.push(
                CaseRecord::new(
                    cfg.seed,
                    format!("case{case:02}/dim-bound-N{:02}", level.n),
                    over,
                    0.0,
                )
                .with_details(details(&[
                    ("corner_dim", num(level.corner.dim as f64)),
                    ("bound", num(bound as f64)),
                ])),
            );
        }

        // Nesting between consecutive built levels.
        for (w, d) in seq.levels.windows(2).zip(seq.nesting_defects()) {
            records.push(CaseRecord::new(
                cfg.seed,
                format!("case{case:02}/nesting-N{:02}", w[0].n),
                d,
                1e-10,
            ));
        }

        let rows = seq.diagnostics(&cfg.p_list)?;
        for row in &rows {
            // Tail estimate at p = 2 (= tuple size here).
            if row.p == 2.0 {
                records.push(
                    CaseRecord::new(
                        cfg.seed,
                        format!("case{case:02}/tail-N{:02}-op{}", row.n, row.op_index),
                        row.approx_error,
                        row.tail_bound,
                    )
                    .with_details(details(&[
                        ("corner_dim", num(row.corner_dim as f64)),
                        ("compression_error", num(row.compression_error)),
                    ])),
                );
            }
            if row.op_index == 0 {
                records.push(CaseRecord::new(
                    cfg.seed,
                    format!("case{case:02}/commuting-N{:02}", row.n),
                    row.max_pairwise_commutator,
                    1e-10,
                ));
            }
            if let Some(m) = row.min_increment_eig {
                if row.p == 2.0 {
                    records.push(CaseRecord::new(
                        cfg.seed,
                        format!("case{case:02}/monotone-N{:02}-op{}", row.n, row.op_index),
                        (-m).max(0.0),
                        1e-10,
                    ));
                }
            }
            csv.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                cfg.seed,
                case,
                row.n,
                row.op_index,
                fmt(row.p),
                fmt(row.approx_error),
                fmt(row.corner_commutator),
                fmt(row.compression_error),
                fmt(row.tail_bound),
                row.tail_bound_ok,
                row.corner_dim,
                row.dim_bound,
                row.min_increment_eig.map(fmt).unwrap_or_default(),
                fmt(row.max_pairwise_commutator),
            ));
        }
    }

    Ok((
        records,
        vec![Artifact {
            filename: "berg_diagnostics.csv",
            content: csv,
        }],
    ))
}
