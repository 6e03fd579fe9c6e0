// The evolved-game roster from GET /games, shown exactly as the server ranks
// it (no client-side filtering or re-sorting).

export interface GameEntry {
    id: string
    algo: string
    meanFitness: number
    genome: number[]
}

type FetchLike = (url: string) => Promise<{
    ok: boolean
    status: number
    json(): Promise<unknown>
}>

export async function fetchGames(baseUrl: string, fetchFn: FetchLike): Promise<GameEntry[]> {
    const resp = await fetchFn(`${baseUrl}/games`)
    if (!resp.ok) {
        throw new Error(`game list request failed: ${resp.status}`)
    }
    const rows = await resp.json()
    if (!Array.isArray(rows)) {
        throw new Error('game list is not an array')
    }
    return rows as GameEntry[]
}

export function gameLabel(entry: GameEntry): string {
    return `${entry.id}  fitness ${entry.meanFitness.toFixed(2)}`
}
