// Thin client for the service HTTP API. Network failures throw
// NetworkError so callers can tell "offline" apart from a server verdict.

export interface ErrorBody {
  code: string;
  detail: string;
  violations?: { item_id: string | null; reason: string }[];
}

export class ApiError extends Error {
  readonly status: number;
  readonly code: string;
  readonly violations: { item_id: string | null; reason: string }[];

  constructor(status: number, body: ErrorBody) {
    super(`${body.code}: ${body.detail}`);
    this.status = status;
    this.code = body.code;
    this.violations = body.violations ?? [];
  }
}

export class NetworkError extends Error {}

export interface BundleStatus {
  bundle_id: string | null;
  status: string;
  error?: string;
  detail?: string;
  response_id?: string;
}

export interface BundlesResult {
  statuses: BundleStatus[];
  acks: string[];
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ServiceClient {
  private readonly baseUrl: string;
  private readonly fetchImpl: FetchLike;
  private token: string | null = null;

  constructor(baseUrl: string, fetchImpl?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/$/, '');
    this.fetchImpl = fetchImpl ?? ((url, init) => fetch(url, init));
  }

  setToken(token: string | null): void {
    this.token = token;
  }

  private async request(method: string, path: string, body?: unknown): Promise<unknown> {
    const headers: Record<string, string> = { 'Content-Type': 'application/json' };
    if (this.token) {
      headers.Authorization = `Bearer ${this.token}`;
    }
    let response: Response;
    try {
      response = await this.fetchImpl(this.baseUrl + path, {
        method,
        headers,
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (cause) {
      throw new NetworkError(`service unreachable: ${String(cause)}`);
    }
    const data = (await response.json().catch(() => ({}))) as Record<string, unknown>;
    if (!response.ok) {
      const error = (data.error ?? { code: 'Error', detail: response.statusText }) as ErrorBody;
      throw new ApiError(response.status, error);
    }
    return data;
  }

  async login(userId: string, password: string): Promise<string> {
    const data = (await this.request('POST', '/login', {
      user_id: userId,
      password,
    })) as { token: string };
    this.token = data.token;
    return data.token;
  }

  async submitResponse(record: unknown): Promise<string> {
    const data = (await this.request('POST', '/responses', record)) as { id: string };
    return data.id;
  }

  async postBundles(framesHex: string[]): Promise<BundlesResult> {
    return (await this.request('POST', '/bundles', { frames: framesHex })) as BundlesResult;
  }

  async setConsent(subjectId: string, dataType: string, decision: string): Promise<unknown> {
    return this.request('POST', '/consent', {
      subject_id: subjectId,
      data_type: dataType,
      decision,
    });
  }

  async getScreenings(subjectId: string): Promise<unknown[]> {
    const data = (await this.request(
      'GET',
      `/subjects/${encodeURIComponent(subjectId)}/screenings`,
    )) as { screenings: unknown[] };
    return data.screenings;
  }

  async getDue(subjectId: string): Promise<{ state: string; due_at: string }> {
    return (await this.request(
      'GET',
      `/subjects/${encodeURIComponent(subjectId)}/due`,
    )) as { state: string; due_at: string };
  }

  async submitSus(items: number[], toolLabel: string): Promise<number> {
    const data = (await this.request('POST', '/sus', {
      items,
      tool_label: toolLabel,
    })) as { score: number };
    return data.score;
  }
}
