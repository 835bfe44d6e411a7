/**
 * Client-side mirror of a server session.
 *
 * Keeps the snapshot stack the server maintains, plus UI-only state
 * (selected diagram side, pinned configurations, growth series). All
 * mutations funnel through one in-flight guard so the local stack can
 * never diverge from the server's undo history.
 */

import {
  ApiClient,
  DiagramResponse,
  LiftSpec,
  MergeResponse,
  ProblemSnapshot,
  SolveResponse,
} from "./api.js";

export interface GrowthPoint {
  labels: number;
  white_configs: number;
  black_configs: number;
}

export class MutationInFlight extends Error {
  constructor() {
    super("another operation is still running");
    this.name = "MutationInFlight";
  }
}

export class WorkbenchSession {
  private snapshots: ProblemSnapshot[] = [];
  private growthSeries: GrowthPoint[] = [];
  private inFlight = false;
  side: "white" | "black" = "black";
  pinned: Set<string> = new Set();

  constructor(private client: ApiClient) {}

  get sessionId(): string {
    const snap = this.current;
    if (!snap) throw new Error("no problem loaded");
    return snap.session;
  }

  get current(): ProblemSnapshot | undefined {
    return this.snapshots[this.snapshots.length - 1];
  }

  get depth(): number {
    return this.snapshots.length;
  }

  get growth(): readonly GrowthPoint[] {
    return this.growthSeries;
  }

  get busy(): boolean {
    return this.inFlight;
  }

  private recordGrowth(snap: ProblemSnapshot): void {
    this.growthSeries.push({
      labels: snap.alphabet.length,
      white_configs: snap.white_configs ?? 0,
      black_configs: snap.black_configs ?? 0,
    });
  }

  /** Run one mutation at a time; concurrent calls fail fast. */
  private async mutate<T>(op: () => Promise<T>): Promise<T> {
    if (this.inFlight) throw new MutationInFlight();
    this.inFlight = true;
    try {
      return await op();
    } finally {
      this.inFlight = false;
    }
  }

  private push(snap: ProblemSnapshot): ProblemSnapshot {
    this.snapshots.push(snap);
    this.recordGrowth(snap);
    return snap;
  }

  loadProblem(text: string): Promise<ProblemSnapshot> {
    return this.mutate(async () => {
      const snap = await this.client.parseProblem(text);
      this.snapshots = [];
      this.growthSeries = [];
      this.pinned.clear();
      return this.push(snap);
    });
  }

  loadFamily(kind: string, params: Record<string, number>): Promise<ProblemSnapshot> {
    return this.mutate(async () => {
      const snap = await this.client.family(kind, params);
      this.snapshots = [];
      this.growthSeries = [];
      this.pinned.clear();
      return this.push(snap);
    });
  }

  diagram(full = false): Promise<DiagramResponse> {
    return this.client.diagram(this.sessionId, this.side, full);
  }

  reStep(steps = 1): Promise<ProblemSnapshot> {
    return this.mutate(async () =>
      this.push(await this.client.reStep(this.sessionId, steps)),
    );
  }

  lift(spec: LiftSpec): Promise<ProblemSnapshot> {
    return this.mutate(async () =>
      this.push(await this.client.lift(this.sessionId, spec)),
    );
  }

  merge(groups: string[][]): Promise<MergeResponse> {
    return this.mutate(async () => {
      const snap = await this.client.mergeLabels(this.sessionId, groups);
      this.push(snap);
      return snap;
    });
  }

  undo(): Promise<ProblemSnapshot> {
    return this.mutate(async () => {
      if (this.snapshots.length <= 1) throw new Error("nothing to undo");
      const snap = await this.client.undo(this.sessionId);
      this.snapshots.pop();
      this.growthSeries.pop();
      // the popped local snapshot must equal what the server restored
      const local = this.current;
      if (!local || local.text !== snap.text) {
        // resync from the server rather than show stale text
        this.snapshots[this.snapshots.length - 1] = snap;
      }
      return snap;
    });
  }

  /** Probe: solve on a concrete support without touching the session stack. */
  probe(graph: string, opts: { lift?: LiftSpec; budget_ms?: number } = {}): Promise<SolveResponse> {
    return this.client.solve({ session: this.sessionId, graph, ...opts });
  }

  togglePin(label: string): void {
    if (this.pinned.has(label)) this.pinned.delete(label);
    else this.pinned.add(label);
  }
}
