// Browser entry point: wires the game list, canvas, keyboard and socket
// together. All game logic lives server-side; this file only shuttles frames.

import { fetchGames, GameEntry, gameLabel } from './gamelist.js'
import { InputSender } from './input.js'
import { PlaytestClient, SocketLike } from './net.js'
import { renderResult, renderState, ViewConfig } from './render.js'

const canvas = document.getElementById('board') as HTMLCanvasElement
const ctx = canvas.getContext('2d')!
const listEl = document.getElementById('games') as HTMLUListElement
const statusEl = document.getElementById('status') as HTMLParagraphElement
const reconnectEl = document.getElementById('reconnect') as HTMLButtonElement

const query = new URLSearchParams(location.search)
const view: ViewConfig = {
    canvasWidth: canvas.width,
    canvasHeight: canvas.height,
    // the wire protocol carries no world size; pass ?w=&h= when the server
    // was started with a non-default world
    worldWidth: Number(query.get('w')) || 640,
    worldHeight: Number(query.get('h')) || 480,
}

let client: PlaytestClient | null = null
let lastSessionId: string | null = null

const sender = new InputSender((frame) => client?.sendAction(frame))

function setStatus(text: string): void {
    statusEl.textContent = text
}

// Narrow the DOM socket to the handler shape the client expects; the DOM
// onmessage signature takes a full MessageEvent and is not assignable as-is.
function wrapSocket(ws: WebSocket): SocketLike {
    const sock: SocketLike = {
        send: (data) => ws.send(data),
        close: () => ws.close(),
        onmessage: null,
        onclose: null,
    }
    ws.onmessage = (ev) => sock.onmessage?.({ data: ev.data })
    ws.onclose = () => sock.onclose?.()
    return sock
}

function connect(onOpen: (c: PlaytestClient) => void): void {
    const proto = location.protocol === 'https:' ? 'wss' : 'ws'
    const socket = new WebSocket(`${proto}://${location.host}/play`)
    socket.onopen = () => {
        client = new PlaytestClient(wrapSocket(socket), {
            onSession: (id) => {
                lastSessionId = id
                reconnectEl.hidden = true
                setStatus(`session ${id.slice(0, 8)} running`)
            },
            onState: (frame) => {
                renderState(ctx, view, frame)
                sender.onState()   // exactly one action per server tick
            },
            onResult: (frame) => {
                const text = renderResult(ctx, view, frame)
                setStatus(text)
                lastSessionId = null
                sender.releaseAll()
            },
            onError: (message) => setStatus(`server: ${message}`),
            onClosed: () => {
                setStatus('connection lost')
                reconnectEl.hidden = lastSessionId === null
                sender.releaseAll()
            },
        })
        onOpen(client)
    }
    socket.onerror = () => setStatus('cannot reach the play-test server')
}

function startGame(entry: GameEntry): void {
    client?.close()
    connect((c) => c.start(entry.genome, 1, Date.now() >>> 0))
}

reconnectEl.addEventListener('click', () => {
    const sid = lastSessionId
    if (sid !== null) connect((c) => c.resume(sid))
})

window.addEventListener('keydown', (ev) => {
    if (!ev.repeat && sender.keyDown(ev.key)) ev.preventDefault()
})
window.addEventListener('keyup', (ev) => {
    if (sender.keyUp(ev.key)) ev.preventDefault()
})

async function loadList(): Promise<void> {
    try {
        const games = await fetchGames('', (url) => fetch(url))
        listEl.textContent = ''
        if (games.length === 0) {
            setStatus('no evolved games on the server yet')
            return
        }
        for (const entry of games) {
            const item = document.createElement('li')
            const button = document.createElement('button')
            button.textContent = gameLabel(entry)
            button.addEventListener('click', () => startGame(entry))
            item.appendChild(button)
            listEl.appendChild(item)
        }
        setStatus('pick a game; arrows steer and thrust, space shoots')
    } catch (err) {
        setStatus(String(err))
    }
}

void loadList()
