/** Typed client for the grading service HTTP API. */

export interface ProblemSummary {
  problem_id: string;
  title: string;
}

export interface BankBlock {
  tag: string;
  text: string;
  max_indent_hint: number;
}

export interface BankView {
  problem_id: string;
  shuffle_seed: number;
  blocks: BankBlock[];
}

export interface Placement {
  tag: string;
  indent: number;
}

export interface GradeResponse {
  score: number;
  exact: boolean;
  edit_distance: number;
  best_dag: string;
  first_error_index: number | null;
  message: string;
}

export interface AttemptRecord {
  attempt_id: string;
  problem_id: string;
  timestamp: number;
  submission: Placement[];
  score: number;
  exact: boolean;
  first_error_index: number | null;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const response = await fetch(url, init);
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = (await response.json()) as { detail?: unknown };
      if (body && body.detail !== undefined) detail = String(body.detail);
    } catch {
      // keep the status text
    }
    throw new ApiError(response.status, detail);
  }
  return (await response.json()) as T;
}

export class ApiClient {
  constructor(private readonly baseUrl: string = "") {}

  listProblems(): Promise<ProblemSummary[]> {
    return request(`${this.baseUrl}/api/problems`);
  }

  fetchBank(problemId: string, seed?: number): Promise<BankView> {
    const query = seed === undefined ? "" : `?seed=${seed}`;
    return request(`${this.baseUrl}/api/problems/${encodeURIComponent(problemId)}${query}`);
  }

  grade(problemId: string, placed: Placement[]): Promise<GradeResponse> {
    return request(`${this.baseUrl}/api/problems/${encodeURIComponent(problemId)}/grade`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ placed }),
    });
  }

  attempts(problemId: string): Promise<AttemptRecord[]> {
    return request(`${this.baseUrl}/api/problems/${encodeURIComponent(problemId)}/attempts`);
  }
}
