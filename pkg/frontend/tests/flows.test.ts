// Contract tests against a mocked API: the disambiguation flow, guest-mode
// gating, and the path view, using the payload shapes the server emits for
// the bundled tiny corpus.

import { describe, expect, it } from "vitest";

import { ApiClient, type AuthorRow, type PathPayload } from "../src/api.js";
import {
  renderDiscussion,
  renderPathView,
  renderSearchResults,
} from "../src/render.js";
import { AppState, LoginFlow } from "../src/state.js";

const ALICE: AuthorRow = {
  id: "A1",
  display_name: "Alice Müller",
  institution: { id: "I1", display_name: "Universität Hamburg" },
  works_count: 2,
  cited_by_count: 11,
  orcid: null,
};

type Reply = { status?: number; body: unknown };

function mockFetch(routes: Record<string, Reply>): typeof fetch {
  return async (input: RequestInfo | URL, init?: RequestInit) => {
    const url = typeof input === "string" ? input : input.toString();
    const key = `${init?.method ?? "GET"} ${url}`;
    const reply = routes[key];
    if (!reply) {
      throw new Error(`unexpected request: ${key}`);
    }
    return new Response(JSON.stringify(reply.body), {
      status: reply.status ?? 200,
      headers: { "Content-Type": "application/json" },
    });
  };
}

describe("disambiguation flow", () => {
  it("reaches identified mode after claiming a candidate", async () => {
    const api = new ApiClient(
      mockFetch({
        "POST /api/login": {
          body: {
            candidates: [
              {
                id: "A1",
                display_name: "Alice Müller",
                institution: { id: "I1", display_name: "Universität Hamburg" },
                works_count: 2,
                cited_by_count: 11,
                affiliation_match: true,
              },
            ],
          },
        },
        "POST /api/claim": {
          status: 201,
          body: { token: "ab".repeat(16), author: ALICE },
        },
      }),
    );
    const state = new AppState();
    const flow = new LoginFlow(api, state);

    expect(state.identified).toBe(false);
    await flow.submit("müller", "hamburg");
    expect(flow.status).toBe("candidates");
    expect(flow.candidates.map((c) => c.id)).toEqual(["A1"]);
    expect(flow.candidates[0].affiliation_match).toBe(true);

    const claimed = await flow.choose("A1");
    expect(claimed).toBe(true);
    expect(state.identified).toBe(true);
    expect(state.session?.author.display_name).toBe("Alice Müller");
    expect(state.session?.token).toHaveLength(32);
  });

  it("claim failure keeps the user signed out", async () => {
    const api = new ApiClient(
      mockFetch({
        "POST /api/claim": {
          status: 404,
          body: { code: "not_found", message: "no author with id 'A99'" },
        },
      }),
    );
    const state = new AppState();
    const flow = new LoginFlow(api, state);
    expect(await flow.choose("A99")).toBe(false);
    expect(state.identified).toBe(false);
    expect(flow.error).toContain("A99");
  });

  it("zero candidates leaves guest mode available", async () => {
    const api = new ApiClient(
      mockFetch({ "POST /api/login": { body: { candidates: [] } } }),
    );
    const state = new AppState();
    const flow = new LoginFlow(api, state);
    await flow.submit("nobody", null);
    expect(flow.status).toBe("candidates");
    expect(flow.candidates).toEqual([]);
    flow.cancel();
    expect(flow.status).toBe("idle");
    expect(state.identified).toBe(false);
  });
});

describe("guest-mode gating", () => {
  const comments = {
    total: 1,
    page: 1,
    items: [
      { id: 1, work_id: "W1", author_id: "A1", body: "Nice result", created_at: 1700000000 },
    ],
  };

  it("hides the comment form for guests", () => {
    const html = renderDiscussion(comments, false);
    expect(html).not.toContain("<form");
    expect(html).toContain("Sign in");
    expect(html).toContain("Nice result");
  });

  it("shows the comment form once identified", () => {
    const html = renderDiscussion(comments, true);
    expect(html).toContain('data-form="comment"');
    expect(html).toContain("<textarea");
  });
});

describe("path view", () => {
  const fixturePath: PathPayload = {
    nodes: [
      { id: "A1", kind: "author", display_name: "Alice Müller" },
      { id: "W1", kind: "work", display_name: "Graph Neural Ranking" },
      { id: "A2", kind: "author", display_name: "Bob Chen" },
      { id: "W2", kind: "work", display_name: "Neural Ranking Models" },
      { id: "A3", kind: "author", display_name: "Carol Diaz" },
    ],
    hops: 4,
    coauthor_steps: 2,
  };

  it("renders the 5-node fixture chain with the hop caption", () => {
    const html = renderPathView("A1", "A3", fixturePath, {
      total: 2,
      page: 1,
      items: [ALICE],
    });
    const nodeCount = (html.match(/class="path-node/g) ?? []).length;
    expect(nodeCount).toBe(5);
    expect(html).toContain("2 co-author steps");
    expect(html).toContain("Graph Neural Ranking");
    expect(html).toContain("Carol Diaz");
    expect(html).toContain("Common connections");
  });

  it("renders an explanatory empty state for NoPath", () => {
    const html = renderPathView("A1", "A5", null, { total: 0, page: 1, items: [] });
    expect(html).toContain("No authorship path");
    expect(html).not.toContain("path-node");
  });

  it("notes the single-node case for identical authors", () => {
    const html = renderPathView("A1", "A1", {
      nodes: [{ id: "A1", kind: "author", display_name: "Alice Müller" }],
      hops: 0,
      coauthor_steps: 0,
    }, { total: 0, page: 1, items: [] });
    expect(html).toContain("Same author");
    expect((html.match(/class="path-node/g) ?? []).length).toBe(1);
  });

  it("fetches the path via the client and maps no_path to null", async () => {
    const api = new ApiClient(
      mockFetch({
        "GET /api/path?from=A1&to=A5": {
          status: 404,
          body: { code: "no_path", message: "no authorship path from A1 to A5" },
        },
      }),
    );
    expect(await api.path("A1", "A5")).toBeNull();
  });
});

describe("search rendering mirrors the API examples", () => {
  it("lists works in the order the API returned", () => {
    const page = {
      total: 2,
      page: 1,
      items: [
        {
          id: "W2",
          title: "Neural Ranking Models",
          publication_year: 2020,
          venue: { id: "V1", display_name: "ACL" },
          authors: [{ id: "A2", display_name: "Bob Chen" }],
          cited_by_count: 25,
          is_open_access: false,
          abstract_snippet: "A survey of neural models.",
        },
        {
          id: "W1",
          title: "Graph Neural Ranking",
          publication_year: 2021,
          venue: { id: "V2", display_name: "NeurIPS" },
          authors: [{ id: "A1", display_name: "Alice Müller" }],
          cited_by_count: 10,
          is_open_access: true,
          abstract_snippet: null,
        },
      ],
    };
    const html = renderSearchResults(
      { criterion: "works", query: "ranking", page: 1, sort: "relevance" },
      page,
    );
    const first = html.indexOf("Neural Ranking Models");
    const second = html.indexOf("Graph Neural Ranking");
    expect(first).toBeGreaterThan(-1);
    expect(second).toBeGreaterThan(first);
    expect(html).toContain("Cited by 25");
    expect(html).toContain("Open Access");
  });
});

describe("stale responses", () => {
  it("sequence numbers invalidate superseded navigations", () => {
    const state = new AppState();
    const first = state.beginRequest();
    const second = state.beginRequest();
    expect(state.isCurrent(first)).toBe(false);
    expect(state.isCurrent(second)).toBe(true);
  });
});
