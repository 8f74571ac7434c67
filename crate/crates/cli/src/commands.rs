use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use anyhow::Context;
use gectag_core::ensemble::vote_with_report;
use gectag_core::infer::{apply_distribution, evaluate_dev, grid_search, read_distributions, InferenceTweaks};
use gectag_core::inflector::{SHIPPED_LEXICON, SHIPPED_VERB_FORMS};
use gectag_core::labeled::{read_jsonl, write_jsonl, LabeledSentence};
use gectag_core::preprocess::{build_vocabulary, pairs_from_m2, preprocess_corpus, read_parallel};
use gectag_core::score::{load_m2, score_corpus};
use gectag_core::speller::SHIPPED_DICTIONARY;
use gectag_core::{apply_tags, detokenize, tokenize, EditTag, ResourceSet, TagVocabulary, TagsetKind, Token};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::args::*;
use crate::report::{io_error, open_output, require_files, CliError, CliResult, Report};

pub fn run(cli: Cli) -> CliResult<()> {
    let g = &cli.global;
    if g.threads == Some(0) {
        return Err(CliError::Usage("--threads must be at least 1".into()));
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = g.threads {
        pool = pool.num_threads(n);
    }
    let pool = pool
        .build()
        .map_err(|e| CliError::Internal(format!("thread pool: {e}")))?;
    pool.install(|| match &cli.command {
        Command::Preprocess(a) => preprocess(g, a),
        Command::Apply(a) => apply(g, a),
        Command::Infer(a) => infer(g, a),
        Command::Tune(a) => tune(g, a),
        Command::Ensemble(a) => ensemble(g, a),
        Command::Score(a) => score(g, a),
        Command::Stats(a) => stats(g, a),
    })
}

fn resource_paths(g: &GlobalOpts) -> [PathBuf; 3] {
    let dir = g.data_dir.clone().unwrap_or_else(gectag_core::data::default_data_dir);
    [
        g.dictionary.clone().unwrap_or_else(|| dir.join(SHIPPED_DICTIONARY)),
        g.lexicon.clone().unwrap_or_else(|| dir.join(SHIPPED_LEXICON)),
        g.verb_forms.clone().unwrap_or_else(|| dir.join(SHIPPED_VERB_FORMS)),
    ]
}

fn load_resources(g: &GlobalOpts, report: &mut Report) -> CliResult<ResourceSet> {
    let [d, l, v] = resource_paths(g);
    let set = ResourceSet::load(d, l, v)?;
    let w = set.speller.warnings();
    if w.total() > 0 {
        report.warn(format!("dictionary: {} lines skipped or merged", w.total()));
    }
    Ok(set)
}

fn validate(g: &GlobalOpts, inputs: &[&PathBuf], needs_resources: bool) -> CliResult<()> {
    require_files(inputs.iter().copied())?;
    if needs_resources {
        require_files(resource_paths(g).iter())?;
    }
    Ok(())
}

fn read_token_lines(path: &Path) -> CliResult<Vec<Vec<Token>>> {
    let f = File::open(path).map_err(|e| io_error(path, e))?;
    BufReader::new(f)
        .lines()
        .map(|l| l.map(|l| tokenize(&l)).map_err(|e| io_error(path, e)))
        .collect()
}

fn read_labeled(path: &Path) -> CliResult<Vec<LabeledSentence>> {
    let f = File::open(path).map_err(|e| io_error(path, e))?;
    Ok(read_jsonl(BufReader::new(f)).map_err(|e| e.with_path(path))?)
}

fn write_lines(out: &mut dyn Write, path: Option<&Path>, lines: &[Vec<Token>]) -> CliResult<()> {
    let fail = |e| io_error(path.unwrap_or(Path::new("<stdout>")), e);
    for l in lines {
        writeln!(out, "{}", detokenize(l)).map_err(fail)?;
    }
    out.flush().map_err(fail)
}

fn finish(out: &mut dyn Write, path: Option<&Path>) -> CliResult<()> {
    out.flush()
        .map_err(|e| io_error(path.unwrap_or(Path::new("<stdout>")), e))
}

fn preprocess(g: &GlobalOpts, a: &PreprocessArgs) -> CliResult<()> {
    let inputs: Vec<&PathBuf> = [&a.source, &a.target, &a.m2].into_iter().flatten().collect();
    validate(g, &inputs, true)?;
    if a.max_rounds == 0 {
        return Err(CliError::Usage("--max-rounds must be at least 1".into()));
    }
    let mut report = Report::new("preprocess", g.seed);
    let pairs = match (&a.source, &a.target, &a.m2) {
        (Some(s), Some(t), _) => {
            let open = |p: &Path| File::open(p).map(BufReader::new).map_err(|e| io_error(p, e));
            read_parallel(open(s)?, open(t)?)
                .with_context(|| format!("reading {} and {}", s.display(), t.display()))?
        }
        (_, _, Some(m)) => pairs_from_m2(&load_m2(m)?, a.annotator)?,
        _ => return Err(CliError::Usage("give --source and --target, or --m2".into())),
    };
    let set = load_resources(g, &mut report)?;
    let res = set.resources();
    let out = preprocess_corpus(&pairs, a.tagset, &res, a.max_rounds)?;

    let broken = out
        .rows
        .par_iter()
        .filter(|r| apply_tags(&r.source, &r.tags, &res).ok().as_ref() != r.target.as_ref())
        .count();
    if broken > 0 {
        return Err(CliError::Internal(format!("{broken} labeled rows do not reproduce their target")));
    }
    if out.stats.dropped > 0 {
        report.warn(format!("{} pairs could not be labeled and were dropped", out.stats.dropped));
    }

    let vocab = build_vocabulary(out.rows.iter(), a.tagset, a.vocab_size)?;
    if let Some(p) = &a.vocab_out {
        std::fs::write(p, vocab.kept.to_text()).map_err(|e| io_error(p, e))?;
    }

    let mut w = open_output(a.output.as_deref())?;
    write_jsonl(&mut w, &out.rows).map_err(|e| io_error(a.output.as_deref().unwrap_or(Path::new("<stdout>")), e))?;
    finish(&mut w, a.output.as_deref())?;

    report.set("tagset", a.tagset.as_str());
    report.set("stats", &out.stats);
    report.set("distinct_tags", vocab.distinct_tags());
    report.set("edit_instances", vocab.edit_instances());
    report.set("vocab_size", vocab.kept.len());
    report.set("vocab_coverage", vocab.coverage);
    report.emit(g.report.as_deref(), a.output.is_none())
}

fn apply(g: &GlobalOpts, a: &ApplyArgs) -> CliResult<()> {
    validate(g, &[&a.input], true)?;
    let mut report = Report::new("apply", g.seed);
    let rows = read_labeled(&a.input)?;
    let set = load_resources(g, &mut report)?;
    let res = set.resources();
    let outputs: Vec<Vec<Token>> = rows
        .par_iter()
        .map(|r| apply_tags(&r.source, &r.tags, &res))
        .collect::<Result<_, _>>()?;
    let mismatches = rows
        .iter()
        .zip(&outputs)
        .filter(|(r, o)| r.target.as_ref().is_some_and(|t| t != *o))
        .count();
    if mismatches > 0 {
        report.warn(format!("{mismatches} rows do not reproduce their stored target"));
    }
    let mut w = open_output(a.output.as_deref())?;
    write_lines(&mut w, a.output.as_deref(), &outputs)?;
    report.set("rows", rows.len());
    report.set("target_mismatches", mismatches);
    report.emit(g.report.as_deref(), a.output.is_none())
}

fn load_distributions(path: &Path) -> CliResult<Vec<gectag_core::infer::TagDistribution>> {
    let f = File::open(path).map_err(|e| io_error(path, e))?;
    Ok(read_distributions(BufReader::new(f)).map_err(|e| e.with_path(path))?)
}

fn check_tweaks(t: &TweakArgs) -> CliResult<InferenceTweaks> {
    if !t.cb.is_finite() || !t.mep.is_finite() {
        return Err(CliError::Usage("--cb and --mep must be finite".into()));
    }
    Ok(InferenceTweaks::new(t.cb, t.mep))
}

fn infer(g: &GlobalOpts, a: &InferArgs) -> CliResult<()> {
    validate(g, &[&a.distributions, &a.vocab], true)?;
    let tweaks = check_tweaks(&a.tweaks)?;
    let mut report = Report::new("infer", g.seed);
    let vocab = TagVocabulary::load(&a.vocab)?;
    let dists = load_distributions(&a.distributions)?;
    let set = load_resources(g, &mut report)?;
    let res = set.resources();
    let outputs: Vec<Vec<Token>> = dists
        .par_iter()
        .map(|d| apply_distribution(d, &vocab, tweaks, &res))
        .collect::<Result<_, _>>()?;
    let changed = dists
        .iter()
        .zip(&outputs)
        .filter(|(d, o)| d.source.get(1..) != Some(&o[..]))
        .count();
    let mut w = open_output(a.output.as_deref())?;
    write_lines(&mut w, a.output.as_deref(), &outputs)?;
    report.set("sentences", outputs.len());
    report.set("changed", changed);
    report.set("tweaks", tweaks);
    report.emit(g.report.as_deref(), a.output.is_none())
}

fn tune(g: &GlobalOpts, a: &TuneArgs) -> CliResult<()> {
    let mut inputs: Vec<&PathBuf> = a.dev.iter().collect();
    inputs.extend([&a.distributions, &a.vocab]);
    validate(g, &inputs, true)?;
    if !(a.beta > 0.0 && a.beta.is_finite()) {
        return Err(CliError::Usage("--beta must be positive".into()));
    }
    let mut report = Report::new("tune", g.seed);
    let m2 = a.dev.last().expect("clap requires --dev");
    let gold = load_m2(m2)?;
    if a.dev.len() == 2 {
        let src = read_token_lines(&a.dev[0])?;
        if src.len() != gold.len() {
            return Err(CliError::Data(anyhow::anyhow!(
                "{} has {} lines but {} has {} sentences",
                a.dev[0].display(),
                src.len(),
                m2.display(),
                gold.len()
            )));
        }
        if let Some(i) = src.iter().zip(&gold).position(|(s, g)| *s != g.source) {
            return Err(CliError::Data(anyhow::anyhow!(
                "{}:{}: sentence differs from the M2 source",
                a.dev[0].display(),
                i + 1
            )));
        }
    }
    let vocab = TagVocabulary::load(&a.vocab)?;
    let dists = load_distributions(&a.distributions)?;
    for (i, (d, s)) in dists.iter().zip(&gold).enumerate() {
        if d.source.first().is_none_or(|t| !t.is_start()) || d.source[1..] != s.source[..] {
            return Err(CliError::Data(anyhow::anyhow!(
                "{}:{}: distribution tokens differ from the M2 source",
                a.distributions.display(),
                i + 1
            )));
        }
    }
    let set = load_resources(g, &mut report)?;
    let res = set.resources();
    let grid = grid_search(|t| evaluate_dev(&dists, &gold, &vocab, t, &res, a.beta))?;

    let mut w = open_output(a.output.as_deref())?;
    w.write_all(grid.to_csv().as_bytes())
        .map_err(|e| io_error(a.output.as_deref().unwrap_or(Path::new("<stdout>")), e))?;
    finish(&mut w, a.output.as_deref())?;
    report.set("cells", grid.table.len());
    report.set("beta", a.beta);
    report.set("best", json!({
        "confidence_bias": grid.best.confidence_bias,
        "min_error_prob": grid.best.min_error_prob,
        "f_beta": grid.best_f_beta,
    }));
    report.emit(g.report.as_deref(), a.output.is_none())
}

fn ensemble(g: &GlobalOpts, a: &EnsembleArgs) -> CliResult<()> {
    let mut inputs = vec![&a.source];
    inputs.extend(&a.hyp);
    validate(g, &inputs, false)?;
    let k = a.hyp.len();
    let threshold = a.threshold.unwrap_or(k - 1);
    if threshold == 0 || threshold > k {
        return Err(CliError::Usage(format!("--threshold must be between 1 and {k}")));
    }
    let mut report = Report::new("ensemble", g.seed);
    let source = read_token_lines(&a.source)?;
    let systems: Vec<Vec<Vec<Token>>> = a.hyp.iter().map(|p| read_token_lines(p)).collect::<CliResult<_>>()?;
    for (p, s) in a.hyp.iter().zip(&systems) {
        if s.len() != source.len() {
            return Err(CliError::Data(anyhow::anyhow!(
                "{} has {} lines but the source has {}",
                p.display(),
                s.len(),
                source.len()
            )));
        }
    }
    let results = (0..source.len())
        .into_par_iter()
        .map(|i| {
            let outs: Vec<Vec<Token>> = systems.iter().map(|s| s[i].clone()).collect();
            vote_with_report(&source[i], &outs, Some(threshold))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let accepted: usize = results.iter().map(|r| r.accepted.len()).sum();
    let dropped: usize = results.iter().map(|r| r.dropped_overlaps).sum();
    let outputs: Vec<Vec<Token>> = results.into_iter().map(|r| r.output).collect();
    let mut w = open_output(a.output.as_deref())?;
    write_lines(&mut w, a.output.as_deref(), &outputs)?;
    report.set("systems", k);
    report.set("threshold", threshold);
    report.set("sentences", outputs.len());
    report.set("accepted_edits", accepted);
    report.set("dropped_overlaps", dropped);
    report.emit(g.report.as_deref(), a.output.is_none())
}

fn score(g: &GlobalOpts, a: &ScoreArgs) -> CliResult<()> {
    validate(g, &[&a.hyp, &a.gold], false)?;
    if !(a.beta > 0.0 && a.beta.is_finite()) {
        return Err(CliError::Usage("--beta must be positive".into()));
    }
    let mut report = Report::new("score", g.seed);
    let hyps = read_token_lines(&a.hyp)?;
    let gold = load_m2(&a.gold)?;
    let mut s = score_corpus(&hyps, &gold, a.beta)
        .with_context(|| format!("scoring {} against {}", a.hyp.display(), a.gold.display()))?;
    if !a.categories.is_empty() {
        let keep: Vec<&str> = a.categories.iter().map(|c| c.trim()).filter(|c| !c.is_empty()).collect();
        s.filter_categories(&keep);
    }
    if let Some(p) = &a.output {
        std::fs::write(p, s.category_csv()).map_err(|e| io_error(p, e))?;
    }
    report.set("sentences", hyps.len());
    report.set("score", &s);
    report.emit(g.report.as_deref(), false)
}

#[derive(Serialize)]
struct FileStats {
    path: String,
    rows: usize,
    tagset: &'static str,
    distinct_tags: usize,
    edit_instances: usize,
    rows_without_target: usize,
    round_trip_failures: usize,
    histogram: Vec<(String, usize)>,
}

fn narrowest_tagset(rows: &[LabeledSentence]) -> TagsetKind {
    let tags = rows.iter().flat_map(|r| &r.tags);
    let (mut spell, mut inflect) = (false, false);
    for t in tags {
        spell |= matches!(t, EditTag::Spell);
        inflect |= matches!(t, EditTag::Inflect(_));
    }
    match (spell, inflect) {
        (false, false) => TagsetKind::Basetags,
        (true, false) => TagsetKind::Spell,
        (false, true) => TagsetKind::Inflect,
        (true, true) => TagsetKind::SpellInflect,
    }
}

fn stats(g: &GlobalOpts, a: &StatsArgs) -> CliResult<()> {
    let inputs: Vec<&PathBuf> = a.input.iter().collect();
    validate(g, &inputs, false)?;
    let mut report = Report::new("stats", g.seed);
    let corpora: Vec<Vec<LabeledSentence>> = a.input.iter().map(|p| read_labeled(p)).collect::<CliResult<_>>()?;
    let needs_resources = corpora.iter().flatten().any(|r| r.target.is_some());
    let set = if needs_resources {
        require_files(resource_paths(g).iter())?;
        Some(load_resources(g, &mut report)?)
    } else {
        None
    };
    let res = set.as_ref().map(ResourceSet::resources).unwrap_or_default();

    let mut files = Vec::new();
    for (path, rows) in a.input.iter().zip(&corpora) {
        let mut counts: HashMap<String, usize> = HashMap::new();
        for t in rows.iter().flat_map(|r| &r.tags) {
            *counts.entry(t.to_string()).or_default() += 1;
        }
        let mut histogram: Vec<(String, usize)> = counts.into_iter().collect();
        histogram.sort_by(|x, y| y.1.cmp(&x.1).then_with(|| x.0.cmp(&y.0)));
        let failures = rows
            .par_iter()
            .filter(|r| match &r.target {
                Some(t) => apply_tags(&r.source, &r.tags, &res).ok().as_ref() != Some(t),
                None => false,
            })
            .count();
        if failures > 0 {
            report.warn(format!("{}: {failures} rows fail the round trip", path.display()));
        }
        files.push(FileStats {
            path: path.display().to_string(),
            rows: rows.len(),
            tagset: narrowest_tagset(rows).as_str(),
            distinct_tags: histogram.len(),
            edit_instances: histogram.iter().filter(|(t, _)| t != "$KEEP").map(|(_, c)| c).sum(),
            rows_without_target: rows.iter().filter(|r| r.target.is_none()).count(),
            round_trip_failures: failures,
            histogram,
        });
    }
    report.set("files", files);
    report.emit(g.report.as_deref(), false)
}
