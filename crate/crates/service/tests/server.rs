use std::path::PathBuf;

use serde_json::Value;
use tokio::io::{AsyncReadExt, AsyncWriteExt};
use tokio::net::{TcpListener, TcpStream};
use tokio::sync::oneshot;

use sourcing_core::sample;
use sourcing_service::serve_until;

/// One HTTP/1.1 exchange over a fresh connection; returns (status, body).
async fn request(addr: std::net::SocketAddr, method: &str, path: &str, body: &str) -> (u16, Value) {
    let mut stream = TcpStream::connect(addr).await.unwrap();
    let head = format!(
        "{method} {path} HTTP/1.1\r\nhost: localhost\r\nconnection: close\r\ncontent-length: {}\r\n\r\n",
        body.len()
    );
    stream.write_all(head.as_bytes()).await.unwrap();
    stream.write_all(body.as_bytes()).await.unwrap();
    let mut response = String::new();
    stream.read_to_string(&mut response).await.unwrap();
    let status = response[9..12].parse().unwrap();
    let (_, payload) = response.split_once("\r\n\r\n").unwrap();
    (status, serde_json::from_str(payload).unwrap())
}

async fn start(snapshot: PathBuf) -> (std::net::SocketAddr, oneshot::Sender<()>, tokio::task::JoinHandle<std::io::Result<()>>) {
    let listener = TcpListener::bind("127.0.0.1:0").await.unwrap();
    let addr = listener.local_addr().unwrap();
    let (stop, stopped) = oneshot::channel::<()>();
    let server = tokio::spawn(serve_until(listener, Some(snapshot), async {
        let _ = stopped.await;
    }));
    (addr, stop, server)
}

#[tokio::test]
async fn scenarios_survive_a_restart_through_the_snapshot() {
    let dir = tempfile::tempdir().unwrap();
    let snapshot = dir.path().join("scenarios.json");

    let (addr, stop, server) = start(snapshot.clone()).await;
    let (status, created) = request(addr, "POST", "/scenarios", sample::RAW_DOCUMENT).await;
    assert_eq!(status, 201);
    let id = created["id"].as_str().unwrap().to_string();
    let (status, edited) = request(addr, "PUT", &format!("/scenarios/{id}/plan/Georgican/Chest"), "0").await;
    assert_eq!(status, 200);
    assert_eq!(edited["evaluation"]["total_cost"], "455130.00");
    stop.send(()).unwrap();
    server.await.unwrap().unwrap();
    assert!(snapshot.exists());

    let (addr, stop, server) = start(snapshot.clone()).await;
    let (status, handle) = request(addr, "GET", &format!("/scenarios/{id}"), "").await;
    assert_eq!(status, 200);
    assert_eq!(handle["version"], 2);
    let (_, e) = request(addr, "GET", &format!("/scenarios/{id}/evaluation"), "").await;
    assert_eq!(e["total_cost"], "455130.00");
    stop.send(()).unwrap();
    server.await.unwrap().unwrap();
}
