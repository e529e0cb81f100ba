//! The shared data layer under attack: a producer appends Layer-3 messages,
//! a detector polls them, and a malicious xApp rewrites a stored record in
//! place -- no credentials required, which is precisely the modelled
//! vulnerability.
//!
//! ```bash
//! cargo run -p ranwatch --example sdl_mutation
//! ```

use anyhow::Result;

use ranwatch::hypoglyph::SubstitutionMap;
use ranwatch::message::{MessageCatalog, Tmsi};
use ranwatch::sdl::{SdlCursor, SdlStore};

fn main() -> Result<()> {
    let store = SdlStore::new();
    let catalog = MessageCatalog::default();

    // producer: one UE session goes into the store
    let mut session = catalog.canonical_session(0, Tmsi(0x00c0ffee), 1717);
    for (i, msg) in session.iter_mut().enumerate() {
        msg.seq = i as u64;
        store.append(msg.clone())?;
    }
    println!("producer appended {} messages", store.len());

    // detector: polls everything that arrived so far
    let mut cursor = SdlCursor::new();
    let before = store.poll_new(&mut cursor);
    println!("\ndetector poll #1 ({} new messages):", before.len());
    for view in before.iter().take(3) {
        println!("  seq {}  {}", view.seq, view.render());
    }
    println!("  ...");

    // malicious xApp: rewrites the stored name of seq 0 through the
    // confusable map; note there is no identity anywhere in this call
    store.mutate(0, &SubstitutionMap::builtin())?;
    let record = store.record(0).unwrap();
    println!("\nattacker mutated seq 0 (record version now {}):", record.version);
    println!("  stored name: {}", record.message.name);
    println!(
        "  codepoints:  {}",
        record.message.name.chars().map(|c| format!("U+{:04X}", c as u32)).collect::<Vec<_>>().join(" ")
    );

    // a detector that polls from scratch now reads the manipulated bytes
    let mut fresh = SdlCursor::new();
    let after = store.poll_new(&mut fresh);
    println!("\ndetector poll from cursor 0 sees the mutated text:");
    println!("  seq 0  {}", after[0].render());
    println!("  byte-equal to the original? {}", after[0].name == "RRCSetupRequest");

    std::fs::create_dir_all("ranwatch-out")?;
    store.snapshot("ranwatch-out/sdl_snapshot.jsonl".as_ref())?;
    println!("\nwrote ranwatch-out/sdl_snapshot.jsonl (dataset format plus a version key)");
    Ok(())
}
