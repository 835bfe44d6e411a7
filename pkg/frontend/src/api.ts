/**
 * Typed client for the workbench JSON API.
 *
 * The client never interprets constraint semantics; every verdict string
 * is passed through verbatim from the server, so anything the UI shows
 * is byte-identical to the corresponding CLI output.
 */

export interface ProblemSnapshot {
  session: string;
  text: string;
  history: string[];
  alphabet: string[];
  white_configs?: number;
  black_configs?: number;
}

export interface DiagramResponse {
  session: string;
  side: string;
  text: string;
  edges: [string, string][];
}

export interface ReResponse extends ProblemSnapshot {
  growth: string;
}

export interface MergeResponse extends ProblemSnapshot {
  label_map: Record<string, string>;
}

export interface RelaxCheckResponse {
  session: string;
  ok: boolean;
  reason: string;
  text: string;
}

export interface SolveResponse {
  verdict: string;
  text: string;
}

export interface OracleResponse {
  text: string;
  solvable: boolean;
}

export interface TextResponse {
  text: string;
}

export type LiftSpec = { delta: number; rank: number };

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(detail);
    this.name = "ApiError";
  }
  /** Resource guards (422) are actionable: suggest shrinking the problem. */
  get isGuard(): boolean {
    return this.status === 422;
  }
}

export class ApiClient {
  constructor(
    private baseUrl: string,
    private fetchFn: typeof fetch = fetch,
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const res = await this.fetchFn(this.baseUrl + path, {
      method,
      headers: { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!res.ok) {
      let detail = res.statusText;
      try {
        const parsed = await res.json();
        if (parsed && typeof parsed.detail === "string") detail = parsed.detail;
      } catch {
        /* non-JSON error body; keep statusText */
      }
      throw new ApiError(res.status, detail);
    }
    return (await res.json()) as T;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>("POST", path, body);
  }

  parseProblem(text: string): Promise<ProblemSnapshot> {
    return this.post("/api/problem/parse", { text });
  }

  family(kind: string, params: Record<string, number>): Promise<ProblemSnapshot> {
    return this.post("/api/family", { kind, ...params });
  }

  getProblem(session: string): Promise<ProblemSnapshot> {
    return this.request("GET", `/api/problem/${session}`);
  }

  diagram(session: string, side: "white" | "black", full = false): Promise<DiagramResponse> {
    return this.post(`/api/problem/${session}/diagram`, { side, full });
  }

  reStep(session: string, steps = 1): Promise<ReResponse> {
    return this.post(`/api/problem/${session}/re`, { steps });
  }

  lift(session: string, spec: LiftSpec): Promise<ProblemSnapshot> {
    return this.post(`/api/problem/${session}/lift`, spec);
  }

  mergeLabels(session: string, groups: string[][]): Promise<MergeResponse> {
    return this.post(`/api/problem/${session}/merge`, { groups });
  }

  relaxCheck(session: string, target: string, map?: string): Promise<RelaxCheckResponse> {
    return this.post(`/api/problem/${session}/relax-check`, { target, map });
  }

  undo(session: string): Promise<ProblemSnapshot> {
    return this.post(`/api/session/${session}/undo`, {});
  }

  solve(req: {
    session?: string;
    problem?: string;
    graph: string;
    lift?: LiftSpec;
    scope?: (string | number)[];
    budget_ms?: number;
  }): Promise<SolveResponse> {
    return this.post("/api/solve", req);
  }

  oracle(req: { session?: string; problem?: string; graph: string }): Promise<OracleResponse> {
    return this.post("/api/oracle", req);
  }

  bound(req: Record<string, unknown>): Promise<TextResponse> {
    return this.post("/api/bound", req);
  }

  graphGen(kind: string, params: Record<string, number>): Promise<TextResponse> {
    return this.post("/api/graph/gen", { kind, ...params });
  }
}
