//! LLM-pipeline robustness with the deterministic mock backend: every one
//! of the 1,016 messages gets a verdict, including the hypoglyphed ones the
//! autoencoder chokes on.
//!
//! ```bash
//! cargo run -p ranwatch --example llm_mock_detection
//! ```

use anyhow::Result;

use ranwatch::eval::{run_llm_experiment, EvalOptions};
use ranwatch::forge::{forge_dataset, ForgeConfig};
use ranwatch::llm::{build_prompt, MockRuleBackend, PromptTemplate};
use ranwatch::message::MessageCatalog;
use ranwatch::window::window_for;

fn main() -> Result<()> {
    let forged = forge_dataset(&ForgeConfig::default())?;
    let template = PromptTemplate::default();

    // what one detection prompt looks like, hypoglyphs passed through raw
    let views: Vec<_> = forged.messages.iter().map(|m| m.view()).collect();
    let hypo_seq = forged.hypoglyph_seqs[0] as usize;
    let prompt = build_prompt(&window_for(&views, hypo_seq, 3)?, &template);
    println!("prompt for the first hypoglyphed message (seq {hypo_seq}):");
    println!("--- system ---\n{}", prompt.system);
    println!("--- user ---\n{}", prompt.user);

    let w = 5;
    let mut backend = MockRuleBackend::new(&MessageCatalog::default());
    let report = run_llm_experiment(
        &forged.messages,
        &mut backend,
        &template,
        w,
        &EvalOptions::default(),
    )?;

    println!("\n--- mock backend run, w={w} ---");
    println!("verdicts emitted: {} (terminated_early: {:?})", report.messages_evaluated, report.terminated_early);
    let m = report.metrics.unwrap();
    println!("recall on injected Blind DoS: {:.3}", m.recall);
    println!("precision: {:.3}  f1: {:.3}  fpr: {:.4}", m.precision, m.f1, m.fpr);
    println!("indeterminate verdicts: {}", report.indeterminate);
    println!("mean latency: {:.6}s  max: {:.6}s", report.mean_latency_s, report.max_latency_s);
    println!("latency violations (> 1s): {}", report.latency_violations.len());
    Ok(())
}
