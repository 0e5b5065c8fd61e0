// Typed client over the service endpoints. All state-changing calls
// carry the record version they read; a 409 means another writer got
// there first and the caller should refetch and retry.

import type {
  BoundaryDoc,
  DocJudgment,
  DocumentPayload,
  RankedTopicDoc,
  RoleCreate,
  RolePayload,
  SearchResponse,
  StatsPayload,
  StructureNode,
  TopicPayload,
} from './types.js';

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
    this.name = 'ApiError';
  }
}

export function isStale(error: unknown): boolean {
  return error instanceof ApiError && error.status === 409;
}

type FetchLike = typeof fetch;

export class ApiClient {
  constructor(
    private baseUrl: string = '',
    private fetchImpl: FetchLike = fetch,
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, init);
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const body = (await response.json()) as { detail?: string };
        if (body.detail) detail = body.detail;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, detail);
    }
    return response.json() as Promise<T>;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(body),
    });
  }

  health(): Promise<{ status: string }> {
    return this.request('/health');
  }

  stats(): Promise<StatsPayload> {
    return this.request('/stats');
  }

  search(query: string, role?: string | null, k = 20): Promise<SearchResponse> {
    const params = new URLSearchParams({ q: query, k: String(k) });
    if (role) params.set('role', role);
    return this.request(`/search?${params}`);
  }

  document(docId: string): Promise<DocumentPayload> {
    return this.request(`/documents/${encodeURIComponent(docId)}`);
  }

  createTopic(name: string, seed: string): Promise<TopicPayload> {
    return this.post('/topics', { name, seed });
  }

  listTopics(): Promise<TopicPayload[]> {
    return this.request('/topics');
  }

  topic(topicId: string): Promise<TopicPayload> {
    return this.request(`/topics/${encodeURIComponent(topicId)}`);
  }

  suggestions(topicId: string, n = 20): Promise<{ suggestions: string[] }> {
    return this.request(`/topics/${encodeURIComponent(topicId)}/suggestions?n=${n}`);
  }

  judgeWords(
    topicId: string,
    version: number,
    accept: string[],
    reject: string[],
  ): Promise<TopicPayload> {
    return this.post(`/topics/${encodeURIComponent(topicId)}/judgments`, {
      version,
      accept,
      reject,
    });
  }

  boundary(topicId: string, band = 10): Promise<{ documents: BoundaryDoc[] }> {
    return this.request(`/topics/${encodeURIComponent(topicId)}/boundary?band=${band}`);
  }

  calibrate(
    topicId: string,
    version: number,
    judgments: DocJudgment[],
  ): Promise<TopicPayload> {
    return this.post(`/topics/${encodeURIComponent(topicId)}/calibrate`, {
      version,
      judgments,
    });
  }

  topicRanking(topicId: string, k = 10): Promise<{ documents: RankedTopicDoc[] }> {
    return this.request(`/topics/${encodeURIComponent(topicId)}/ranking?k=${k}`);
  }

  createRole(role: RoleCreate): Promise<RolePayload> {
    return this.post('/roles', role);
  }

  listRoles(): Promise<RolePayload[]> {
    return this.request('/roles');
  }

  structure(): Promise<{ nodes: StructureNode[] }> {
    return this.request('/structure');
  }
}

/**
 * Run a versioned mutation; on a stale-version rejection, refetch the
 * current version and retry once. Concurrent edits stay safe because
 * the server serializes writers.
 */
export async function withStaleRetry<T>(
  mutate: (version: number) => Promise<T>,
  freshVersion: () => Promise<number>,
  version: number,
): Promise<T> {
  try {
    return await mutate(version);
  } catch (error) {
    if (!isStale(error)) throw error;
    return mutate(await freshVersion());
  }
}
