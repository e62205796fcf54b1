import { figOscillation } from "./figures";
import { runCli } from "./cli";

runCli("fig_oscillation", ["trace.jsonl"], figOscillation);
