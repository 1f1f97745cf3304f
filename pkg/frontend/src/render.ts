// Pure HTML renderers: payloads in, markup out. No fetching, no DOM access,
// no derived domain numbers — everything shown comes from one API response.

import type {
  AuthorRow,
  Candidate,
  CoauthorEntry,
  CommentPayload,
  FocusEntry,
  InstitutionRow,
  Page,
  PathPayload,
  ScoredWork,
  SearchRow,
  VenueRow,
  WorkDetail,
  WorkRow,
} from "./api.js";
import type { AuthorTab, Criterion, SortKey, ViewRoute, WorkTab } from "./routes.js";
import { serializeRoute } from "./routes.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

const esc = escapeHtml;

function link(route: ViewRoute, label: string, className = ""): string {
  const cls = className ? ` class="${className}"` : "";
  return `<a${cls} href="${serializeRoute(route)}">${esc(label)}</a>`;
}

function authorLink(ref: { id: string; display_name: string | null }): string {
  return link({ view: "author", id: ref.id, tab: "works" }, ref.display_name ?? ref.id);
}

function workLink(work: { id: string; title: string }): string {
  return link({ view: "work", id: work.id, tab: "details" }, work.title);
}

// ---------------------------------------------------------------------------
// Shell
// ---------------------------------------------------------------------------

export function renderHeader(
  criterion: Criterion,
  query: string,
  session: { author: AuthorRow } | null,
): string {
  const options = (["works", "authors", "institutions", "venues"] as Criterion[])
    .map(
      (value) =>
        `<option value="${value}"${value === criterion ? " selected" : ""}>${value}</option>`,
    )
    .join("");
  const who = session
    ? `<span class="session">${authorLink(session.author)}
         ${link({ view: "author", id: session.author.id, tab: "works" }, "My works", "my-works")}
         <button type="button" data-action="sign-out">Sign out</button></span>`
    : `<span class="session">${link({ view: "login" }, "Sign in", "sign-in")}</span>`;
  return `<header>
    <a class="brand" href="#/">ScholarGraph</a>
    <form class="search-bar" data-form="search">
      <select name="criterion">${options}</select>
      <input name="q" type="search" placeholder="Search works, authors, institutions, venues…"
             value="${esc(query)}">
      <button type="submit">Search</button>
    </form>
    ${who}
  </header>`;
}

export function renderHome(): string {
  return `<section class="home">
    <h1>Discover research and researchers</h1>
    <p>Search the knowledge graph by work, author, institution, or venue.
       Open an author page to explore co-author networks and focus areas,
       or trace the shortest authorship path between two researchers.</p>
  </section>`;
}

export function renderErrorPanel(message: string): string {
  return `<section class="error-panel">
    <p>Something went wrong: ${esc(message)}</p>
    <button type="button" data-action="retry">Retry</button>
  </section>`;
}

export function renderNotFound(label: string): string {
  return `<section class="error-panel"><p>${esc(label)} was not found.</p></section>`;
}

// ---------------------------------------------------------------------------
// Search results
// ---------------------------------------------------------------------------

function renderWorkRow(work: WorkRow): string {
  const authors = work.authors.map(authorLink).join(", ");
  const venue = work.venue
    ? link({ view: "venue", id: work.venue.id }, work.venue.display_name ?? work.venue.id)
    : "";
  const snippet = work.abstract_snippet
    ? `<p class="snippet">${esc(work.abstract_snippet)}</p>`
    : "";
  return `<article class="result work-row">
    <h3>${workLink(work)}</h3>
    <p class="meta">${authors} · ${work.publication_year}${venue ? ` · ${venue}` : ""}</p>
    ${snippet}
    <p class="counts">Cited by ${work.cited_by_count}${work.is_open_access ? ' · <span class="oa-badge">Open Access</span>' : ""}</p>
  </article>`;
}

function renderAuthorRow(author: AuthorRow): string {
  const institution = author.institution
    ? link(
        { view: "institution", id: author.institution.id },
        author.institution.display_name ?? author.institution.id,
      )
    : "<em>no affiliation</em>";
  const orcid = author.orcid ? ` · ORCID ${esc(author.orcid)}` : "";
  return `<article class="result author-row">
    <h3>${authorLink(author)}</h3>
    <p class="meta">${institution}</p>
    <p class="counts">${author.works_count} publications · ${author.cited_by_count} citations
      · id ${esc(author.id)}${orcid}</p>
  </article>`;
}

function renderInstitutionRow(inst: InstitutionRow): string {
  const title = inst.location ? `${inst.display_name} — ${inst.location}` : inst.display_name;
  const lines = [
    inst.homepage ? `<a href="${esc(inst.homepage)}" rel="external">${esc(inst.homepage)}</a>` : null,
    inst.sector ? esc(inst.sector) : null,
    inst.acronym ? `known as ${esc(inst.acronym)}` : null,
  ].filter((line) => line !== null);
  return `<article class="result institution-row">
    <h3>${link({ view: "institution", id: inst.id }, title)}</h3>
    ${lines.length ? `<p class="meta">${lines.join(" · ")}</p>` : ""}
  </article>`;
}

function renderVenueRow(venue: VenueRow): string {
  return `<article class="result venue-row">
    <h3>${link({ view: "venue", id: venue.id }, venue.display_name)}</h3>
    <p class="counts">${venue.works_count} publications · ${venue.cited_by_count} citations</p>
  </article>`;
}

export function renderSearchResults(
  route: { criterion: Criterion; query: string; page: number; sort: SortKey },
  page: Page<SearchRow>,
): string {
  const rows = page.items
    .map((item) => {
      switch (route.criterion) {
        case "works":
          return renderWorkRow(item as WorkRow);
        case "authors":
          return renderAuthorRow(item as AuthorRow);
        case "institutions":
          return renderInstitutionRow(item as InstitutionRow);
        case "venues":
          return renderVenueRow(item as VenueRow);
      }
    })
    .join("");
  const pager = renderPager(route, page.total);
  const summary = `${page.total} result${page.total === 1 ? "" : "s"} for
    “${esc(route.query)}” in ${route.criterion}`;
  return `<section class="search-results">
    <p class="summary">${summary}</p>
    ${rows || "<p class='empty'>Nothing matched.</p>"}
    ${pager}
  </section>`;
}

function renderPager(
  route: { criterion: Criterion; query: string; page: number; sort: SortKey },
  total: number,
): string {
  const pages = Math.max(1, Math.ceil(total / 10));
  if (pages <= 1) return "";
  const previous =
    route.page > 1
      ? link({ view: "search", ...route, page: route.page - 1 }, "← previous", "pager-link")
      : "";
  const next =
    route.page < pages
      ? link({ view: "search", ...route, page: route.page + 1 }, "next →", "pager-link")
      : "";
  return `<nav class="pager">${previous} <span>page ${route.page} of ${pages}</span> ${next}</nav>`;
}

// ---------------------------------------------------------------------------
// Work page
// ---------------------------------------------------------------------------

function tabBar(tabs: { route: ViewRoute; label: string; active: boolean }[]): string {
  return `<nav class="tabs">${tabs
    .map((tab) =>
      tab.active
        ? `<span class="tab active">${esc(tab.label)}</span>`
        : `<a class="tab" href="${serializeRoute(tab.route)}">${esc(tab.label)}</a>`,
    )
    .join("")}</nav>`;
}

export function renderWorkPage(
  work: WorkDetail,
  tab: WorkTab,
  tabContent: string,
): string {
  const tabs = (["details", "citations", "similar", "discussion"] as WorkTab[]).map((t) => ({
    route: { view: "work", id: work.id, tab: t } as ViewRoute,
    label: t,
    active: t === tab,
  }));
  const authors = work.authors.map(authorLink).join(", ");
  const venue = work.venue
    ? link({ view: "venue", id: work.venue.id }, work.venue.display_name ?? work.venue.id)
    : "—";
  return `<section class="work-page">
    <h2>${esc(work.title)}</h2>
    <p class="meta">${authors} · ${work.publication_year} · ${venue}
      ${work.is_open_access ? '· <span class="oa-badge">Open Access</span>' : ""}</p>
    ${tabBar(tabs)}
    <div class="tab-content">${tabContent}</div>
  </section>`;
}

export function renderWorkDetails(work: WorkDetail): string {
  const concepts = work.concepts
    .map((c) => `<span class="chip">${esc(c.label)} ${c.score.toFixed(2)}</span>`)
    .join(" ");
  const identifiers = [
    `id ${esc(work.id)}`,
    work.doi ? `DOI ${esc(work.doi)}` : null,
    work.mag_id ? `MAG ${esc(work.mag_id)}` : null,
  ].filter((x) => x !== null);
  return `<div class="work-details">
    ${work.abstract ? `<p class="abstract">${esc(work.abstract)}</p>` : "<p class='empty'>No abstract.</p>"}
    <p class="identifiers">${identifiers.join(" · ")}</p>
    <p class="counts">Cited by ${work.cited_by_count}</p>
    ${concepts ? `<p class="chips">${concepts}</p>` : ""}
  </div>`;
}

export function renderWorkCitations(citations: Page<WorkRow>): string {
  if (citations.items.length === 0) {
    return "<p class='empty'>No citing works yet.</p>";
  }
  return citations.items.map(renderWorkRow).join("");
}

export function renderWorkSimilar(similar: Page<ScoredWork>): string {
  if (similar.items.length === 0) {
    return "<p class='empty'>No similar works found.</p>";
  }
  return similar.items
    .map(
      (entry) =>
        `<div class="similar-entry"><span class="score">${entry.score.toFixed(3)}</span>
         ${renderWorkRow(entry.work)}</div>`,
    )
    .join("");
}

export function renderDiscussion(
  comments: Page<CommentPayload>,
  identified: boolean,
): string {
  const thread = comments.items
    .map(
      (comment) => `<div class="comment">
        <p class="comment-body">${esc(comment.body)}</p>
        <p class="comment-meta">${authorLink({ id: comment.author_id, display_name: comment.author_id })}
          · #${comment.id}</p>
      </div>`,
    )
    .join("");
  const form = identified
    ? `<form class="comment-form" data-form="comment">
         <textarea name="body" rows="3" maxlength="4096"
                   placeholder="Join the discussion…" required></textarea>
         <button type="submit">Post comment</button>
       </form>`
    : `<p class="guest-note">${link({ view: "login" }, "Sign in")} to join the discussion.</p>`;
  return `<div class="discussion">
    ${thread || "<p class='empty'>No comments yet — start the discussion.</p>"}
    ${form}
  </div>`;
}

// ---------------------------------------------------------------------------
// Author page
// ---------------------------------------------------------------------------

export function renderAuthorPage(
  author: AuthorRow,
  tab: AuthorTab,
  tabContent: string,
): string {
  const tabs = (["works", "coauthors", "focus"] as AuthorTab[]).map((t) => ({
    route: { view: "author", id: author.id, tab: t } as ViewRoute,
    label: t === "coauthors" ? "co-authors" : t,
    active: t === tab,
  }));
  const institution = author.institution
    ? link(
        { view: "institution", id: author.institution.id },
        author.institution.display_name ?? author.institution.id,
      )
    : "<em>no affiliation</em>";
  return `<section class="author-page">
    <h2>${esc(author.display_name)}</h2>
    <p class="meta">${institution} · ${author.works_count} publications
      · ${author.cited_by_count} citations${author.orcid ? ` · ORCID ${esc(author.orcid)}` : ""}</p>
    <form class="path-form" data-form="path">
      <input type="hidden" name="from" value="${esc(author.id)}">
      <input name="to" placeholder="Author id, e.g. A3" required>
      <button type="submit">Find connection</button>
    </form>
    ${tabBar(tabs)}
    <div class="tab-content">${tabContent}</div>
  </section>`;
}

export function renderAuthorWorks(works: Page<WorkRow>, sort: SortKey): string {
  const options = (["citations", "title", "date"] as SortKey[])
    .map((s) => `<option value="${s}"${s === sort ? " selected" : ""}>${s}</option>`)
    .join("");
  const rows = works.items.map(renderWorkRow).join("");
  return `<div class="author-works">
    <label class="sort-select">Sort by
      <select name="sort" data-action="sort-works">${options}</select>
    </label>
    ${rows || "<p class='empty'>No works on record.</p>"}
  </div>`;
}

/** Radial hot-spot layout: the author at the center, co-authors on a ring,
    node size proportional to the number of shared works. */
export function renderCoauthorNetwork(author: AuthorRow, entries: CoauthorEntry[]): string {
  if (entries.length === 0) {
    return "<p class='empty'>No co-authors on record.</p>";
  }
  const size = 420;
  const center = size / 2;
  const radius = 150;
  const maxShared = Math.max(...entries.map((e) => e.shared_work_count));
  const nodes = entries
    .map((entry, index) => {
      const angle = (2 * Math.PI * index) / entries.length - Math.PI / 2;
      const x = center + radius * Math.cos(angle);
      const y = center + radius * Math.sin(angle);
      const r = 10 + 14 * (entry.shared_work_count / maxShared);
      const cx = x.toFixed(1);
      const cy = y.toFixed(1);
      return `
        <line x1="${center}" y1="${center}" x2="${cx}" y2="${cy}" class="net-edge"></line>
        <a href="${serializeRoute({ view: "author", id: entry.author.id, tab: "works" })}">
          <circle cx="${cx}" cy="${cy}" r="${r.toFixed(1)}" class="net-node" data-coauthor="${esc(entry.author.id)}"></circle>
          <text x="${cx}" y="${(y - r - 6).toFixed(1)}" text-anchor="middle" class="net-label">${esc(entry.author.display_name)} (${entry.shared_work_count})</text>
        </a>`;
    })
    .join("");
  return `<figure class="coauthor-network">
    <svg viewBox="0 0 ${size} ${size}" role="img"
         aria-label="Co-author network of ${esc(author.display_name)}">
      ${nodes}
      <circle cx="${center}" cy="${center}" r="16" class="net-center"></circle>
      <text x="${center}" y="${center - 24}" text-anchor="middle" class="net-label net-center-label">
        ${esc(author.display_name)}</text>
    </svg>
  </figure>`;
}

export function renderFocusAreas(focus: Page<FocusEntry>): string {
  if (focus.items.length === 0) {
    return "<p class='empty'>No focus areas on record.</p>";
  }
  return `<div class="focus-areas chips">${focus.items
    .map(
      (entry) =>
        `<span class="chip focus-chip">${esc(entry.label)}
         <span class="chip-score">${entry.score.toFixed(2)}</span></span>`,
    )
    .join(" ")}</div>`;
}

// ---------------------------------------------------------------------------
// Institution / venue pages
// ---------------------------------------------------------------------------

export function renderInstitutionPage(
  inst: InstitutionRow,
  members: Page<AuthorRow>,
): string {
  const facts = [
    inst.location ? esc(inst.location) : null,
    inst.homepage ? `<a href="${esc(inst.homepage)}" rel="external">${esc(inst.homepage)}</a>` : null,
    inst.sector ? esc(inst.sector) : null,
    inst.acronym ? `acronym ${esc(inst.acronym)}` : null,
  ].filter((x) => x !== null);
  return `<section class="institution-page">
    <h2>${esc(inst.display_name)}</h2>
    ${facts.length ? `<p class="meta">${facts.join(" · ")}</p>` : ""}
    <h3>Researchers by citations</h3>
    ${members.items.map(renderAuthorRow).join("") || "<p class='empty'>No affiliated authors.</p>"}
  </section>`;
}

export function renderVenuePage(
  venue: VenueRow,
  works: Page<WorkRow>,
  sort: SortKey,
): string {
  const options = (["citations", "title", "date"] as SortKey[])
    .map((s) => `<option value="${s}"${s === sort ? " selected" : ""}>${s}</option>`)
    .join("");
  return `<section class="venue-page">
    <h2>${esc(venue.display_name)}</h2>
    <p class="meta">${venue.works_count} publications · ${venue.cited_by_count} citations</p>
    <label class="sort-select">Sort by
      <select name="sort" data-action="sort-works">${options}</select>
    </label>
    ${works.items.map(renderWorkRow).join("") || "<p class='empty'>No works on record.</p>"}
  </section>`;
}

// ---------------------------------------------------------------------------
// Path view
// ---------------------------------------------------------------------------

export function renderPathView(
  from: string,
  to: string,
  path: PathPayload | null,
  common: Page<AuthorRow>,
): string {
  let chain: string;
  if (path === null) {
    chain = `<p class="empty no-path">No authorship path connects
      ${esc(from)} and ${esc(to)} in this corpus.</p>`;
  } else if (path.hops === 0) {
    const node = path.nodes[0];
    chain = `<ol class="path-chain">${renderPathNode(node)}</ol>
      <p class="caption">Same author.</p>`;
  } else {
    const steps = `${path.coauthor_steps} co-author step${path.coauthor_steps === 1 ? "" : "s"}`;
    chain = `<ol class="path-chain">${path.nodes.map(renderPathNode).join("")}</ol>
      <p class="caption">${steps} (${path.hops} hops)</p>`;
  }
  const commonList = common.items.length
    ? `<h3>Common connections</h3>${common.items.map(renderAuthorRow).join("")}`
    : from !== to
      ? "<h3>Common connections</h3><p class='empty'>None.</p>"
      : "";
  return `<section class="path-view">
    <h2>Connection from ${esc(from)} to ${esc(to)}</h2>
    ${chain}
    ${commonList}
  </section>`;
}

function renderPathNode(node: { id: string; kind: string; display_name: string }): string {
  const target: ViewRoute =
    node.kind === "author"
      ? { view: "author", id: node.id, tab: "works" }
      : { view: "work", id: node.id, tab: "details" };
  return `<li class="path-node path-${esc(node.kind)}">
    <a href="${serializeRoute(target)}">${esc(node.display_name)}</a>
    <span class="node-kind">${esc(node.kind)}</span>
  </li>`;
}

// ---------------------------------------------------------------------------
// Login dialog
// ---------------------------------------------------------------------------

export function renderLoginDialog(
  status: "idle" | "pending" | "candidates" | "error",
  candidates: Candidate[],
  error: string | null,
): string {
  const form = `<form class="login-form" data-form="login">
    <label>Name <input name="name" required placeholder="e.g. Alice Müller"></label>
    <label>Affiliation <input name="affiliation" placeholder="optional, e.g. Hamburg"></label>
    <button type="submit"${status === "pending" ? " disabled" : ""}>Find my author record</button>
  </form>`;
  let body = "";
  if (status === "candidates") {
    body = candidates.length
      ? `<ul class="candidates">${candidates
          .map(
            (candidate) => `<li>
          <button type="button" data-action="claim" data-author="${esc(candidate.id)}">
            ${esc(candidate.display_name)}</button>
          <span class="meta">${
            candidate.institution
              ? esc(candidate.institution.display_name ?? candidate.institution.id)
              : "no affiliation"
          } · ${candidate.works_count} works · ${candidate.cited_by_count} citations${
            candidate.affiliation_match ? " · affiliation match" : ""
          }</span>
        </li>`,
          )
          .join("")}</ul>`
      : `<p class="empty">No matching author records.
         You can keep exploring as a guest.</p>`;
  } else if (status === "error") {
    body = `<p class="error">${esc(error ?? "Login failed.")}</p>`;
  }
  return `<section class="login-dialog">
    <h2>Who are you?</h2>
    <p>Pick your author record to join discussions. Most features work
       without signing in.</p>
    ${form}
    ${body}
    <p class="guest-note"><a href="#/" data-action="guest">Continue as guest</a></p>
  </section>`;
}
