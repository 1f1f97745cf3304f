// Typed client for the /api routes. Every view reads exclusively from these
// payloads; the UI never derives domain results on its own.

export interface EntityRef {
  id: string;
  display_name: string | null;
}

export interface WorkRow {
  id: string;
  title: string;
  publication_year: number;
  venue: EntityRef | null;
  authors: EntityRef[];
  cited_by_count: number;
  is_open_access: boolean;
  abstract_snippet: string | null;
}

export interface WorkDetail extends WorkRow {
  doi: string | null;
  mag_id: string | null;
  abstract: string | null;
  concepts: { label: string; score: number }[];
  referenced_works: string[];
}

export interface AuthorRow {
  id: string;
  display_name: string;
  institution: EntityRef | null;
  works_count: number;
  cited_by_count: number;
  orcid: string | null;
}

export interface InstitutionRow {
  id: string;
  display_name: string;
  location: string | null;
  homepage: string | null;
  sector: string | null;
  acronym: string | null;
}

export interface VenueRow {
  id: string;
  display_name: string;
  works_count: number;
  cited_by_count: number;
}

export interface Page<T> {
  total: number;
  page: number;
  items: T[];
}

export interface PathNode {
  id: string;
  kind: "author" | "work";
  display_name: string;
}

export interface PathPayload {
  nodes: PathNode[];
  hops: number;
  coauthor_steps: number;
}

export interface Candidate {
  id: string;
  display_name: string;
  institution: EntityRef | null;
  works_count: number;
  cited_by_count: number;
  affiliation_match: boolean;
}

export interface CommentPayload {
  id: number;
  work_id: string;
  author_id: string;
  body: string;
  created_at: number;
}

export interface CoauthorEntry {
  author: AuthorRow;
  shared_work_count: number;
  shared_work_ids: string[];
}

export interface FocusEntry {
  label: string;
  score: number;
}

export interface TopicEntry {
  label: string;
  count: number;
}

export interface ScoredWork {
  score: number;
  work: WorkRow;
}

export type SearchRow = WorkRow | AuthorRow | InstitutionRow | VenueRow;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
    private readonly base = "",
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(this.base + path, init);
    const body = await response.json().catch(() => null);
    if (!response.ok) {
      const code = body && typeof body.code === "string" ? body.code : "error";
      const message =
        body && typeof body.message === "string" ? body.message : response.statusText;
      throw new ApiError(response.status, code, message);
    }
    return body as T;
  }

  private post<T>(path: string, payload: unknown, token?: string): Promise<T> {
    const headers: Record<string, string> = { "Content-Type": "application/json" };
    if (token) headers["X-Session-Token"] = token;
    return this.request<T>(path, {
      method: "POST",
      headers,
      body: JSON.stringify(payload),
    });
  }

  search(
    criterion: string,
    query: string,
    page: number,
    sort: string,
  ): Promise<Page<SearchRow>> {
    const params = new URLSearchParams({
      type: criterion,
      q: query,
      page: String(page),
      sort,
    });
    return this.request(`/api/search?${params}`);
  }

  work(id: string): Promise<WorkDetail> {
    return this.request(`/api/works/${encodeURIComponent(id)}`);
  }

  workCitations(id: string): Promise<Page<WorkRow>> {
    return this.request(`/api/works/${encodeURIComponent(id)}/citations`);
  }

  workSimilar(id: string, k = 10): Promise<Page<ScoredWork>> {
    return this.request(`/api/works/${encodeURIComponent(id)}/similar?k=${k}`);
  }

  comments(workId: string): Promise<Page<CommentPayload>> {
    return this.request(`/api/works/${encodeURIComponent(workId)}/comments`);
  }

  postComment(workId: string, body: string, token: string): Promise<CommentPayload> {
    return this.post(`/api/works/${encodeURIComponent(workId)}/comments`, { body }, token);
  }

  author(id: string): Promise<AuthorRow> {
    return this.request(`/api/authors/${encodeURIComponent(id)}`);
  }

  authorWorks(id: string, sort: string): Promise<Page<WorkRow>> {
    return this.request(
      `/api/authors/${encodeURIComponent(id)}/works?sort=${encodeURIComponent(sort)}&page_size=100`,
    );
  }

  coauthors(id: string): Promise<Page<CoauthorEntry>> {
    return this.request(`/api/authors/${encodeURIComponent(id)}/coauthors?page_size=100`);
  }

  focus(id: string, k = 10): Promise<Page<FocusEntry>> {
    return this.request(`/api/authors/${encodeURIComponent(id)}/focus?k=${k}`);
  }

  institution(id: string): Promise<InstitutionRow> {
    return this.request(`/api/institutions/${encodeURIComponent(id)}`);
  }

  institutionAuthors(id: string): Promise<Page<AuthorRow>> {
    return this.request(
      `/api/institutions/${encodeURIComponent(id)}/authors?page_size=100`,
    );
  }

  venue(id: string): Promise<VenueRow> {
    return this.request(`/api/venues/${encodeURIComponent(id)}`);
  }

  venueWorks(id: string, sort: string): Promise<Page<WorkRow>> {
    return this.request(
      `/api/venues/${encodeURIComponent(id)}/works?sort=${encodeURIComponent(sort)}&page_size=100`,
    );
  }

  /** Shortest authorship path; null when the API answers "no_path". */
  async path(from: string, to: string): Promise<PathPayload | null> {
    const params = new URLSearchParams({ from, to });
    try {
      return await this.request<PathPayload>(`/api/path?${params}`);
    } catch (err) {
      if (err instanceof ApiError && err.code === "no_path") return null;
      throw err;
    }
  }

  common(from: string, to: string): Promise<Page<AuthorRow>> {
    const params = new URLSearchParams({ from, to, page_size: "100" });
    return this.request(`/api/common?${params}`);
  }

  login(name: string, affiliation: string | null): Promise<{ candidates: Candidate[] }> {
    return this.post("/api/login", { name, affiliation });
  }

  claim(authorId: string): Promise<{ token: string; author: AuthorRow }> {
    return this.post("/api/claim", { author_id: authorId });
  }
}
