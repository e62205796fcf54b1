import { figRegimes } from "./figures";
import { runCli } from "./cli";

runCli("fig_regimes", ["inexact.jsonl", "exact.jsonl", "oracle.json"], figRegimes);
